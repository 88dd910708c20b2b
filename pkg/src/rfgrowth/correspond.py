"""Passing between ideals of a Lie ring and normal subgroups of its group.

A lattice with a nilpotent bracket carries a second operation, the group
product coming from the exponential series. When the product of integer
vectors is again an integer vector, the lattice is a group under it and both
structures live on the same points. The two constructions here translate
finite-index substructures across:

  * an ideal I becomes the normal subgroup spanned by the saturated central
    layers of I, each scaled by a power of the denominator constant,
  * a normal subgroup N becomes the ideal generated by scaled layer seeds,
    closed under products, commutators, and brackets.

Both directions come with explicit index inflation bounds, and every claimed
property of an output is verified on the output rather than assumed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as iter_product
from typing import Callable, Optional, Sequence

from .bch import (
    BCHTable,
    as_int_vector,
    build_bch_table,
    group_commutator,
    star,
    star_inverse,
)
from .errors import DimensionMismatch, DomainError, RFGrowthError
from .lattice import Lattice
from .liering import LieRing

INTEGRALITY_BOX_CAP = 70_000
COSET_CAP = 1_000_000
CLOSURE_PASS_CAP = 64


@dataclass(frozen=True)
class LRGroup:
    """A ring whose lattice is closed under the exact group product."""

    ring: LieRing
    table: BCHTable

    def star(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return as_int_vector(star(self.ring, self.table, u, v))

    def inverse(self, v: Sequence[int]) -> list[int]:
        return [int(c) for c in star_inverse(v)]

    def commutator(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return as_int_vector(group_commutator(self.ring, self.table, u, v))


def _unit(k: int, n: int) -> list[int]:
    return [1 if i == k else 0 for i in range(n)]


def validate_lr(L: LieRing, table: Optional[BCHTable] = None) -> LRGroup:
    """Certify that the integer lattice is closed under the group product.

    Class 1 needs nothing and class 2 reduces to every basis bracket being
    even, since the only correction term is half the bracket and that term
    is bilinear. From class 3 on the correction polynomial has per-variable
    degree at most c - 1, and a polynomial of per-variable degree d takes
    integer values everywhere iff it does on {0..d} in each variable, so
    checking the product on a finite box of vector pairs is a complete
    certificate. Rings where that box is too large are refused rather than
    spot-checked.
    """
    c = L.nilpotency_class
    if table is None:
        table = build_bch_table(c)
    elif table.nclass < c:
        raise DomainError(
            f"table class {table.nclass} below ring class {c}", reason="class-mismatch"
        )
    n = L.rank
    if c == 2:
        for i in range(n):
            for j in range(i + 1, n):
                if any(x % 2 for x in L.basis_bracket(i, j)):
                    raise DomainError(
                        f"e{i + 1} * e{j + 1} has a half-integer coordinate",
                        reason="not-star-closed",
                    )
    if c >= 3:
        points = c ** (2 * n)
        if points > INTEGRALITY_BOX_CAP:
            raise DomainError(
                f"integrality certificate needs {points} product evaluations",
                reason="lr-uncertified",
            )
        for xs in iter_product(range(c), repeat=n):
            for ys in iter_product(range(c), repeat=n):
                out = star(L, table, list(xs), list(ys))
                if any(f.denominator != 1 for f in out):
                    raise DomainError(
                        f"{list(xs)} * {list(ys)} is not an integer vector",
                        reason="not-star-closed",
                    )
    return LRGroup(ring=L, table=table)


# -- ideal to normal subgroup ----------------------------------------------------

def _ring_constants(L: LieRing) -> BCHTable:
    # constants always come from the ring's own class, independent of any
    # larger table the group was certified with
    return build_bch_table(L.nilpotency_class)


def _check_finite_ideal(L: LieRing, I: Lattice) -> None:
    if I.ambient_rank != L.rank:
        raise DimensionMismatch("lattice lives in a different ambient module")
    if I.rank != L.rank:
        raise DomainError("construction needs a finite-index input", reason="infinite-index")
    if not L.is_ideal(I):
        raise DomainError("lattice is not an ideal", reason="not-an-ideal")


def ideal_to_normal(G: LRGroup, I: Lattice) -> Lattice:
    """The normal subgroup spanned by scaled saturated layers of an ideal.

    Layer i of the saturated central series meets I in a sublattice; scaling
    it by delta^(c - i) clears every denominator a group-side computation
    can produce, and the span of all the scaled pieces is simultaneously an
    ideal and a normal subgroup squeezed between delta^c * I and I.
    """
    L = G.ring
    _check_finite_ideal(L, I)
    out = _ideal_to_normal_lattice(G, I)
    verdicts = ideal_to_normal_verdicts(G, I, out)
    failed = [name for name, ok in verdicts if not ok]
    if failed:
        raise RFGrowthError("internal", f"construction broke its own guarantees: {failed}")
    return out


def _ideal_to_normal_lattice(G: LRGroup, I: Lattice) -> Lattice:
    L = G.ring
    c = L.nilpotency_class
    delta = _ring_constants(L).delta
    lcs = L.lower_central_series()
    out = Lattice.zero(L.rank)
    for i in range(1, c + 1):
        piece = lcs.saturated_layer(i).intersect(I).scale(delta ** (c - i))
        out = out.add(piece)
    return out


def _star_and_conjugation_closed(G: LRGroup, S: Lattice) -> bool:
    """Generator-level closure of a lattice under the group operations.

    Products and commutators of generators staying inside propagate to all
    elements by induction down the central series: any defect of the pair
    check lives one layer deeper, and the deepest layer is central.
    """
    gens = [list(r) for r in S.basis]
    n = S.ambient_rank
    for a in gens:
        for b in gens:
            if not S.member(G.star(a, b)):
                return False
    for k in range(n):
        v = _unit(k, n)
        for g in gens:
            if not S.member(G.commutator(v, g)):
                return False
            conj = G.star(G.star(v, g), G.inverse(v))
            if not S.member(conj):
                return False
    return True


def ideal_to_normal_verdicts(
    G: LRGroup, I: Lattice, S: Lattice
) -> tuple[tuple[str, bool], ...]:
    """Independent checks of the four guarantees of the forward construction."""
    L = G.ring
    c = L.nilpotency_class
    n = L.rank
    delta = _ring_constants(L).delta
    full = Lattice.full(n)
    idx_i = I.index_in(full)
    idx_s = S.index_in(full)
    bound_ok = idx_i is not None and idx_s is not None and idx_s <= delta ** (c * n) * idx_i
    return (
        ("ideal", L.is_ideal(S)),
        ("star-closed", _star_and_conjugation_closed(G, S)),
        ("sandwich", I.contains_lattice(S) and S.contains_lattice(I.scale(delta**c))),
        ("index-bound", bound_ok),
    )


# -- coset sampling and exact coset counting -------------------------------------

@dataclass(frozen=True)
class CosetCheck:
    ok: bool
    samples: int
    counterexample: Optional[tuple[tuple[int, ...], tuple[int, ...]]]

    def __bool__(self) -> bool:
        return self.ok


def coset_equality_check(
    G: LRGroup, S: Lattice, samples: int = 200, seed: int = 0
) -> CosetCheck:
    """Sampled agreement of additive and multiplicative cosets of S.

    For random v and random s in S this checks v * s in v + S and
    v + s in v * S. Both hold for every v exactly when translates of S by
    the two operations coincide, which is what makes the two index counts
    comparable. A failure is reported with the offending pair.
    """
    if S.ambient_rank != G.ring.rank:
        raise DimensionMismatch("lattice lives in a different ambient module")
    rng = random.Random(seed)
    n = G.ring.rank
    rows = [list(r) for r in S.basis]
    for _ in range(max(1, samples)):
        v = [rng.randint(-8, 8) for _ in range(n)]
        s = [0] * n
        for row in rows:
            k = rng.randint(-3, 3)
            for t in range(n):
                s[t] += k * row[t]
        prod = G.star(v, s)
        diff = [a - b for a, b in zip(prod, v)]
        back = G.star(G.inverse(v), [a + b for a, b in zip(v, s)])
        if not (S.member(diff) and S.member(back)):
            return CosetCheck(ok=False, samples=samples, counterexample=(tuple(v), tuple(s)))
    return CosetCheck(ok=True, samples=samples, counterexample=None)


@dataclass(frozen=True)
class TwoWayIndex:
    lattice_index: int
    group_index: int


def index_two_ways(G: LRGroup, S: Lattice, cap: int = COSET_CAP) -> TwoWayIndex:
    """The index of S counted additively and by walking group cosets.

    The additive count reads elementary divisors off the basis. The group
    count breadth-first explores translates by basis generators, reducing
    each visit to a canonical residue: coordinates are folded left to right
    into the box below the triangular basis diagonal. The reduction is
    canonical only when every bracket value is supported strictly after its
    arguments, because then later folds never disturb finished coordinates;
    other rings are refused rather than counted heuristically.

    Intended for S already validated as a normal subgroup; the two counts
    are returned unreconciled so callers can compare them.
    """
    L = G.ring
    n = L.rank
    if S.ambient_rank != n:
        raise DimensionMismatch("lattice lives in a different ambient module")
    if S.rank != n:
        raise DomainError("coset counting needs finite index", reason="infinite-index")
    if not L.is_coordinate_triangular():
        raise DomainError(
            "exact coset counting is only proven for rings whose brackets are "
            "supported strictly after their arguments",
            reason="not-triangular",
        )
    basis = [list(r) for r in S.basis]
    diag = [basis[i][i] for i in range(n)]
    lattice_index = S.index_in(Lattice.full(n))
    assert lattice_index is not None
    if lattice_index > cap:
        raise DomainError(f"{lattice_index} cosets exceed the cap", reason="coset-cap")

    def residue(vec: Sequence[int]) -> tuple[int, ...]:
        w = list(vec)
        for i in range(n):
            q = w[i] // diag[i]
            if q:
                w = G.star(w, [-q * x for x in basis[i]])
        return tuple(w)

    start = residue([0] * n)
    seen = {start}
    frontier = [start]
    steps = []
    for k in range(n):
        steps.append(_unit(k, n))
        steps.append([-1 if i == k else 0 for i in range(n)])
    while frontier:
        nxt = []
        for r in frontier:
            for s in steps:
                t = residue(G.star(list(r), s))
                if t not in seen:
                    if len(seen) >= cap:
                        raise DomainError("coset walk exceeded the cap", reason="coset-cap")
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return TwoWayIndex(lattice_index=lattice_index, group_index=len(seen))


# -- normal subgroup to ideal -----------------------------------------------------

@dataclass(frozen=True)
class NormalSubgroupWitness:
    lattice: Lattice
    star_closed: bool
    conjugation_closed: bool


def validate_normal_subgroup(G: LRGroup, S: Lattice) -> NormalSubgroupWitness:
    """Check a lattice is a normal subgroup, on generators.

    Generator products certify closure of the whole lattice and commutators
    with ambient basis vectors certify normality, by the same descent as in
    the closure checks: a failure would have to appear in some deepest
    layer, and there the operations are additive.
    """
    if S.ambient_rank != G.ring.rank:
        raise DimensionMismatch("lattice lives in a different ambient module")
    gens = [list(r) for r in S.basis]
    n = G.ring.rank
    for a in gens:
        for b in gens:
            if not S.member(G.star(a, b)):
                raise DomainError(
                    f"product of generators {a} and {b} escapes the lattice",
                    reason="not-star-closed",
                )
    for k in range(n):
        v = _unit(k, n)
        for g in gens:
            if not S.member(G.commutator(v, g)) or not S.member(
                G.star(G.star(v, g), G.inverse(v))
            ):
                raise DomainError(
                    f"conjugating generator {g} by e{k + 1} escapes the lattice",
                    reason="not-normal",
                )
    return NormalSubgroupWitness(lattice=S, star_closed=True, conjugation_closed=True)


def normal_to_ideal(
    G: LRGroup,
    N: NormalSubgroupWitness,
    lattice_only: bool = False,
    f_override: Optional[Callable[[int], int]] = None,
) -> Lattice:
    """The ideal generated by scaled layer seeds of a normal subgroup.

    Seeds are the meets of N with the saturated central layers, layer i
    scaled by f(c - i) where f(0) = 1 and f(i + 1) = (f(i) * lambda^c)^c.
    Since powers in the group are plain scalar multiples, the group the
    seeds generate is computed by alternating product, commutator, and
    bracket closure passes on the lattice until nothing new appears; it is
    additively closed, so lattice arithmetic reaches it exactly. The result
    sits between f(c - 1) * N and N.

    The tower f is doubly exponential in the class, so classes above 3 are
    refused unless lattice_only is set, which also skips the verification
    pass. A custom tower can be supplied to explore sharper constants; the
    containment guarantees are only proven for the default.
    """
    L = G.ring
    c = L.nilpotency_class
    n = L.rank
    S = N.lattice
    if S.ambient_rank != n:
        raise DimensionMismatch("lattice lives in a different ambient module")
    if S.rank != n:
        raise DomainError("construction needs a finite-index input", reason="infinite-index")
    if c > 3 and not lattice_only:
        raise DomainError(
            "index bounds beyond class 3 are astronomically large; "
            "rerun with lattice_only to get the lattice without verification",
            reason="class-cap",
        )
    f = f_override if f_override is not None else _ring_constants(L).f
    lcs = L.lower_central_series()
    cur = Lattice.zero(n)
    for i in range(1, c + 1):
        cur = cur.add(lcs.saturated_layer(i).intersect(S).scale(f(c - i)))

    units = [_unit(k, n) for k in range(n)]
    for _ in range(CLOSURE_PASS_CAP):
        gens = [list(r) for r in cur.basis]
        fresh = []
        for a in gens:
            for b in gens:
                fresh.append(G.star(a, b))
        for v in units:
            for g in gens:
                fresh.append(G.commutator(v, g))
                fresh.append([int(x) for x in L.bracket(v, g)])
        nxt = cur.add(Lattice.from_rows(fresh, n))
        if not S.contains_lattice(nxt):
            raise RFGrowthError("internal", "closure escaped the subgroup it started in")
        if nxt == cur:
            break
        cur = nxt
    else:
        raise RFGrowthError("internal", "closure failed to stabilize")

    if not lattice_only:
        verdicts = normal_to_ideal_verdicts(G, N, cur, f)
        failed = [name for name, ok in verdicts if not ok]
        if failed:
            raise RFGrowthError(
                "internal", f"construction broke its own guarantees: {failed}"
            )
    return cur


def normal_to_ideal_verdicts(
    G: LRGroup,
    N: NormalSubgroupWitness,
    out: Lattice,
    f: Optional[Callable[[int], int]] = None,
) -> tuple[tuple[str, bool], ...]:
    """Independent checks of the guarantees of the reverse construction."""
    L = G.ring
    c = L.nilpotency_class
    n = L.rank
    if f is None:
        f = _ring_constants(L).f
    S = N.lattice
    full = Lattice.full(n)
    idx_n = S.index_in(full)
    idx_out = out.index_in(full)
    scale = f(c - 1)
    bound_ok = (
        idx_n is not None and idx_out is not None and idx_out <= scale**n * idx_n
    )
    return (
        ("ideal", L.is_ideal(out)),
        ("star-closed", _star_and_conjugation_closed(G, out)),
        ("sandwich", S.contains_lattice(out) and out.contains_lattice(S.scale(scale))),
        ("index-bound", bound_ok),
    )
