"""Ideal enumeration in finite quotients, intersections, and the delta invariant.

Two regimes share one chain-descent idea:

  * mod a prime p (vector spaces): ideals are enumerated by descending chains.
    Every ideal of codimension d+1 is a hyperplane of some ideal I of
    codimension d containing [I, L]: in the nilpotent quotient by the smaller
    ideal the center is nonzero, and a central line lifts to such an I. So
    level-by-level hyperplane descent reaches every ideal exactly once after
    canonical-form deduplication.

  * prime powers p^j (lattices): the same descent with index-p steps. An
    ideal of index p^(j+1) sits under an ideal I of index p^j with the
    quotient central, by the matching center argument in the finite quotient,
    and every candidate must contain [I, L] + pI.

Per-(ring, prime) caches hold the levels and the running intersections so
that divisibility searches across many vectors pay for enumeration once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

from .errors import DomainError
from .lattice import Lattice
from .liering import FiniteLieAlgebra, LieRing
from .primes import is_prime

Subspace = tuple  # tuple of tuples: canonical RREF rows mod p, zero rows dropped


# -- F_p linear algebra -------------------------------------------------------

def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> Subspace:
    a = [[c % p for c in row] for row in rows]
    n = len(a[0]) if a else 0
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][col], p - 2, p) if p > 2 else a[r][col]
        a[r] = [c * inv % p for c in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [(c - f * d) % p for c, d in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return tuple(tuple(row) for row in a[:r] if any(row))


def subspace_contains(rows: Subspace, v: Sequence[int], p: int) -> bool:
    w = [c % p for c in v]
    for row in rows:
        col = next(j for j, c in enumerate(row) if c)
        if w[col]:
            f = w[col]
            w = [(c - f * d) % p for c, d in zip(w, row)]
    return not any(w)


def nullspace_mod_p(rows: Subspace, p: int, width: int) -> Subspace:
    """RREF basis of {x : rows . x = 0} in F_p^width."""
    rr = rref_mod_p(list(rows) if rows else [[0] * width], p)
    pivots = [next(j for j, c in enumerate(row) if c) for row in rr]
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for j in free:
        x = [0] * width
        x[j] = 1
        for row, pc in zip(rr, pivots):
            x[pc] = (-row[j]) % p
        basis.append(x)
    return rref_mod_p(basis, p) if basis else ()


def subspace_intersect(a: Subspace, b: Subspace, p: int, width: int) -> Subspace:
    ann = rref_mod_p(
        list(nullspace_mod_p(a, p, width)) + list(nullspace_mod_p(b, p, width)), p
    )
    return nullspace_mod_p(ann, p, width)


def _projective_functionals(null_basis: Subspace, p: int):
    """Nonzero functionals spanned by null_basis, one per projective class."""
    t = len(null_basis)
    if t == 0:
        return
    width = len(null_basis[0])
    # canonical representatives: first nonzero coefficient equals 1
    for lead in range(t):
        for tail in itertools.product(range(p), repeat=t - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            phi = [0] * width
            for c, row in zip(coeffs, null_basis):
                if c:
                    for k in range(width):
                        phi[k] = (phi[k] + c * row[k]) % p
            yield tuple(phi)


# -- mod-p ideal chains -------------------------------------------------------

def _bracket_image_mod_p(A: FiniteLieAlgebra, rows: Subspace) -> Subspace:
    p, n = A.prime, A.rank
    images = []
    for g in rows:
        for k in range(n):
            e_k = [1 if a == k else 0 for a in range(n)]
            images.append(A.bracket_mod(list(g), e_k))
    return rref_mod_p(images, p) if images else ()

def _coords_in_rref(basis: Subspace, v: Sequence[int], p: int) -> list[int]:
    # basis rows are RREF, so coordinates are read off at the pivot columns
    pivots = [next(j for j, c in enumerate(row) if c) for row in basis]
    return [v[col] % p for col in pivots]


def _hyperplanes_containing(
    I_rows: Subspace, W_rows: Subspace, p: int
) -> list[Subspace]:
    """Hyperplanes of span(I_rows) containing span(W_rows), as ambient RREFs."""
    m = len(I_rows)
    if m == 0:
        return []
    wc = rref_mod_p([_coords_in_rref(I_rows, w, p) for w in W_rows], p) if W_rows else ()
    null = nullspace_mod_p(wc, p, m)
    out = []
    width = len(I_rows[0])
    for phi in _projective_functionals(null, p):
        kernel = nullspace_mod_p((phi,), p, m)
        ambient = [
            [sum(c * I_rows[i][k] for i, c in enumerate(x)) % p for k in range(width)]
            for x in kernel
        ]
        out.append(rref_mod_p(ambient, p))
    return out


LEVEL_CAP = 200_000


class _ModPCache:
    """Per-(ring, p) ideal levels by codimension and cumulative intersections."""

    def __init__(self, A: FiniteLieAlgebra):
        if A.exponent != 1:
            raise DomainError(
                "field-level enumeration needs a prime modulus", reason="not-prime"
            )
        self.algebra = A
        n = A.rank
        full = rref_mod_p([[1 if i == j else 0 for j in range(n)] for i in range(n)], A.prime)
        self.levels: list[list[Subspace]] = [[full]]
        derived = A.ring.derived()
        dbar = rref_mod_p([list(r) for r in derived.basis], A.prime) if derived.rank else ()
        # codim-1 ideals cut out exactly the reduced derived subalgebra, and a
        # two-dimensional nilpotent quotient is abelian, so codim-2 ideals
        # also all contain it: the first three intersections need no search
        self.cumulative: list[Subspace] = [full, dbar, dbar]
        self._gammas: dict[int, Subspace] = {}
        self._delta: Optional[int] = None

    def ensure_levels(self, depth: int) -> None:
        A = self.algebra
        while len(self.levels) <= depth:
            seen: dict = {}
            for I_rows in self.levels[-1]:
                if not I_rows:
                    continue
                w = _bracket_image_mod_p(A, I_rows)
                for J in _hyperplanes_containing(I_rows, w, A.prime):
                    seen[J] = True
            if len(seen) > LEVEL_CAP:
                raise DomainError(
                    f"more than {LEVEL_CAP} ideals of codimension "
                    f"{len(self.levels)} mod {A.prime}",
                    reason="level-cap",
                )
            self.levels.append(sorted(seen))

    def cumulative_at(self, depth: int) -> Subspace:
        """Intersection of all ideals of codimension <= depth."""
        n = self.algebra.rank
        p = self.algebra.prime
        while len(self.cumulative) <= depth:
            d = len(self.cumulative)
            self.ensure_levels(d)
            cur = self.cumulative[-1]
            for rows in self.levels[d]:
                if not cur:
                    break
                cur = subspace_intersect(cur, rows, p, n)
            self.cumulative.append(cur)
        return self.cumulative[depth]

    def _gamma_bar(self, d: int) -> Subspace:
        if d not in self._gammas:
            layer = self.algebra.ring.lower_central_series().layer(d)
            rows = [list(r) for r in layer.basis]
            self._gammas[d] = rref_mod_p(rows, self.algebra.prime) if rows else ()
        return self._gammas[d]

    def contains_at(self, depth: int, v: Sequence[int]) -> bool:
        """Whether v lies in every ideal of codimension <= depth."""
        p = self.algebra.prime
        if depth <= 2:
            return subspace_contains(self.cumulative[min(depth, 2)], v, p)
        # a quotient of dimension <= d has class < d, so every such ideal
        # contains the d-th lower central term: membership there is enough
        if subspace_contains(self._gamma_bar(depth), v, p):
            return True
        return subspace_contains(self.cumulative_at(depth), v, p)

    def delta(self) -> int:
        if self._delta is None:
            d = 0
            while self.cumulative_at(d):
                d += 1
            self._delta = d
        return self._delta

    def first_avoiding_ideal(self, depth: int, v: Sequence[int]) -> Subspace:
        """Canonical codim-`depth` ideal avoiding v: parents in sorted order,
        hyperplane functionals in generation order, first avoider wins."""
        A = self.algebra
        self.ensure_levels(depth - 1)
        for I_rows in self.levels[depth - 1]:
            if not I_rows:
                continue
            w = _bracket_image_mod_p(A, I_rows)
            if subspace_contains(w, v, A.prime):
                continue  # v sits in every hyperplane through w
            for J in _hyperplanes_containing(I_rows, w, A.prime):
                if not subspace_contains(J, v, A.prime):
                    return J
        raise DomainError(
            f"no ideal of codimension {depth} avoids the vector", reason="no-avoider"
        )


_MODP_CACHES: dict = {}
_LATTICE_CACHES: dict = {}


def modp_cache(L: LieRing, p: int) -> _ModPCache:
    key = (L, p)
    if key not in _MODP_CACHES:
        _MODP_CACHES[key] = _ModPCache(L.reduce_mod(p))
    return _MODP_CACHES[key]


# -- prime-power ideal chains (lattices) ---------------------------------------

class _LatticeLevelsCache:
    """All ideals of L of index p^j, level by level, with intersections.

    Children of an ideal I are the index-p sublattices containing
    w(I) = [I, L] + pI. The intersection of the hyperplane preimages between
    w(I) and I is w(I) itself, so the meet of the whole level j+1 is the meet
    of w over level j: one level less to materialize than to intersect.
    """

    def __init__(self, L: LieRing, p: int):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime", reason="not-prime")
        self.ring = L
        self.p = p
        self.levels: list[list[Lattice]] = [[Lattice.full(L.rank)]]
        self.meets: list[Lattice] = [Lattice.full(L.rank)]
        self._w_memo: dict[tuple, Lattice] = {}

    def w_of(self, I: Lattice) -> Lattice:
        """[I, L] + pI, the mandatory part of every child of I."""
        key = I.basis
        if key not in self._w_memo:
            L, p, n = self.ring, self.p, self.ring.rank
            e = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            images = [
                [int(c) for c in L.bracket(list(g), e_k)] for g in I.basis for e_k in e
            ]
            self._w_memo[key] = Lattice.from_rows(images, n).add(I.scale(p))
        return self._w_memo[key]

    def children_of(self, I: Lattice):
        """Index-p ideal sublattices of I, in functional generation order."""
        p, n = self.p, self.ring.rank
        w = self.w_of(I)
        coords = [I.coordinates(list(row)) for row in w.basis]
        wc = rref_mod_p(coords, p)
        null = nullspace_mod_p(wc, p, n)
        b = I.rows()
        for phi in _projective_functionals(null, p):
            kernel = nullspace_mod_p((phi,), p, n)
            rows = [
                [sum(x[i] * b[i][k] for i in range(n)) for k in range(n)]
                for x in kernel
            ] + [[p * c for c in row] for row in b]
            yield Lattice.from_rows(rows, n)

    def ensure(self, j: int) -> None:
        while len(self.levels) <= j:
            seen: dict = {}
            for I in self.levels[-1]:
                for child in self.children_of(I):
                    seen[child.basis] = child
            if len(seen) > LEVEL_CAP:
                raise DomainError(
                    f"more than {LEVEL_CAP} ideals of index "
                    f"{self.p}^{len(self.levels)}",
                    reason="level-cap",
                )
            self.levels.append([seen[k] for k in sorted(seen)])

    def level_meet(self, j: int) -> Lattice:
        """Intersection of all ideals of index exactly p^j."""
        while len(self.meets) <= j:
            d = len(self.meets)
            self.ensure(d - 1)
            meet = reduce(
                lambda a, b: a.intersect(b),
                (self.w_of(I) for I in self.levels[d - 1]),
            )
            self.meets.append(meet)
        return self.meets[j]

    def first_avoider(self, j: int, v: Sequence[int]) -> Lattice:
        """Canonical index-p^j ideal avoiding v: parents in sorted order,
        functionals in generation order, first avoider wins."""
        self.ensure(j - 1)
        vv = list(v)
        for I in self.levels[j - 1]:
            if self.w_of(I).member(vv):
                continue  # v sits in every child of I
            if not I.member(vv):
                return next(iter(self.children_of(I)))
            for child in self.children_of(I):
                if not child.member(vv):
                    return child
        raise DomainError(
            f"no ideal of index {self.p}^{j} avoids the vector", reason="no-avoider"
        )


def lattice_cache(L: LieRing, p: int) -> _LatticeLevelsCache:
    key = (L, p)
    if key not in _LATTICE_CACHES:
        _LATTICE_CACHES[key] = _LatticeLevelsCache(L, p)
    return _LATTICE_CACHES[key]


# -- public operations ---------------------------------------------------------

@dataclass(frozen=True)
class IdealModQ:
    """A bracket-closed subgroup of L/qL in canonical form."""

    algebra: FiniteLieAlgebra
    gens: tuple[tuple[int, ...], ...]
    index_exponent: int

    @property
    def index(self) -> int:
        return self.algebra.prime**self.index_exponent

    def lattice(self) -> Lattice:
        """Preimage in the ambient integer module."""
        n = self.algebra.rank
        q = self.algebra.modulus
        scaled = Lattice.full(n).scale(q)
        return Lattice.from_rows(list(self.gens), n).add(scaled)


def enumerate_ideals(A: FiniteLieAlgebra, max_codim: int) -> list[IdealModQ]:
    """All ideals of L/pL of codimension <= max_codim, once each."""
    if A.exponent != 1:
        raise DomainError(
            "enumerate_ideals works mod a prime; use the prime-power variant",
            reason="not-prime",
        )
    if not (0 <= max_codim <= A.rank):
        raise DomainError("codimension out of range", reason="bad-index")
    cache = modp_cache(A.ring, A.prime)
    cache.ensure_levels(max_codim)
    out = []
    for d in range(max_codim + 1):
        for rows in cache.levels[d]:
            out.append(IdealModQ(algebra=A, gens=rows, index_exponent=d))
    return out


def enumerate_ideals_prime_power(
    A: FiniteLieAlgebra, max_index_exponent: int
) -> list[IdealModQ]:
    """All bracket-closed subgroups of L/qL of index <= p^max_index_exponent."""
    if max_index_exponent < 0 or max_index_exponent > A.rank * A.exponent:
        raise DomainError("index exponent out of range", reason="bad-index")
    cache = lattice_cache(A.ring, A.prime)
    q = A.modulus
    n = A.rank
    qlat = Lattice.full(n).scale(q)
    out = []
    for j in range(max_index_exponent + 1):
        cache.ensure(j)
        for I in cache.levels[j]:
            if not I.contains_lattice(qlat):
                continue
            gens = tuple(tuple(r) for r in I.basis)
            out.append(IdealModQ(algebra=A, gens=gens, index_exponent=j))
    return out


def verify_ideal_mod_q(obj: IdealModQ) -> bool:
    """Independent post-hoc check: bracket-closed and the stated index."""
    A = obj.algebra
    lat = obj.lattice()
    if not A.ring.is_ideal(lat):
        return False
    idx = lat.index_in(Lattice.full(A.rank))
    return idx == A.prime**obj.index_exponent


def small_codim_intersection(A: FiniteLieAlgebra, max_codim: int) -> Subspace:
    """Intersection of all ideals of codimension <= max_codim (mod p)."""
    if A.exponent != 1:
        raise DomainError("intersection is a mod-p computation", reason="not-prime")
    return modp_cache(A.ring, A.prime).cumulative_at(max_codim)


def delta_p(L: LieRing, p: int) -> int:
    """Smallest k with trivial intersection of the codim <= k ideals mod p."""
    return modp_cache(L, p).delta()


def delta_ideal_mod_p(
    L: LieRing, p: int, delta: Optional[int] = None
) -> tuple[Subspace, int]:
    """Intersection of ideals of codim < delta mod p, with its dimension."""
    if delta is None:
        delta = delta_p(L, p)
    rows = modp_cache(L, p).cumulative_at(max(delta - 1, 0))
    return rows, len(rows)


@dataclass(frozen=True)
class DeltaSweepReport:
    ring_name: str
    rows: tuple[tuple[int, int, int], ...]  # (prime, delta_p, ideal_dim)
    stabilized: int
    dissenting: tuple[int, ...]


def delta_sweep(L: LieRing, primes: Sequence[int]) -> DeltaSweepReport:
    """delta_p over the given primes with the modal value and dissenters."""
    if not primes:
        raise DomainError("prime list must be nonempty", reason="bad-input")
    rows = []
    for p in sorted(set(primes)):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime", reason="not-prime")
        d = delta_p(L, p)
        _, dim = delta_ideal_mod_p(L, p, d)
        rows.append((p, d, dim))
    counts: dict[int, int] = {}
    for _, d, _ in rows:
        counts[d] = counts.get(d, 0) + 1
    stabilized = max(counts, key=lambda d: (counts[d], -d))
    dissenting = tuple(p for p, d, _ in rows if d != stabilized)
    return DeltaSweepReport(
        ring_name=L.name, rows=tuple(rows), stabilized=stabilized, dissenting=dissenting
    )
