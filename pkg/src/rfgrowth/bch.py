"""Group structure on a nilpotent Lie ring: the truncated log(exp exp) law.

The table builder works in the truncated free associative algebra on two
letters. Coefficients of the group law and of the group commutator are read
off on a Hall basis by exact linear solves, never hard-coded. The inverse
formulas (re-expressing addition and the Lie bracket through the group law
and basic group commutators) are obtained by degree-by-degree collection.

Everything is Fraction-exact. Tables are cached per class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Sequence, Union

from .errors import DimensionMismatch, DomainError, RFGrowthError
from .liering import LieRing, Scalar

MAX_TABLE_CLASS = 6

Word = tuple
Poly = dict


# -- truncated free associative algebra -------------------------------------

def _w_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for w, c in b.items():
        s = out.get(w, 0) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


def _w_scale(a: Poly, s: Fraction) -> Poly:
    return {w: c * s for w, c in a.items()} if s else {}


def _w_mul(a: Poly, b: Poly, cap: int) -> Poly:
    out: Poly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) > cap:
                continue
            w = wa + wb
            s = out.get(w, 0) + ca * cb
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _w_exp(a: Poly, cap: int) -> Poly:
    out: Poly = {(): Fraction(1)}
    term: Poly = {(): Fraction(1)}
    for k in range(1, cap + 1):
        term = _w_scale(_w_mul(term, a, cap), Fraction(1, k))
        out = _w_add(out, term)
    return out


def _w_log(a: Poly, cap: int) -> Poly:
    z = dict(a)
    one = z.pop((), None)
    if one != 1:
        raise RFGrowthError("internal", "log needs constant term 1")
    out: Poly = {}
    term: Poly = {(): Fraction(1)}
    for k in range(1, cap + 1):
        term = _w_mul(term, z, cap)
        out = _w_add(out, _w_scale(term, Fraction((-1) ** (k - 1), k)))
    return out


def _star_words(u: Poly, v: Poly, cap: int) -> Poly:
    """Group law on Lie elements represented as word polynomials."""
    return _w_log(_w_mul(_w_exp(u, cap), _w_exp(v, cap), cap), cap)


def _comm_words(u: Poly, v: Poly, cap: int) -> Poly:
    inv_u, inv_v = _w_scale(u, Fraction(-1)), _w_scale(v, Fraction(-1))
    return _star_words(inv_u, _star_words(inv_v, _star_words(u, v, cap), cap), cap)


# -- Hall basis --------------------------------------------------------------

HallNode = Union[str, tuple]  # "x" / "y" or (left_index, right_index)


def _hall_registry(cap: int) -> tuple[tuple[HallNode, ...], tuple[int, ...]]:
    """Hall elements on two letters through degree cap, in creation order.

    [a, b] is admitted iff a < b in creation order and b is a letter or the
    left constituent of b does not exceed a; degrees then run 2,1,2,3,6,9.
    """
    nodes: list[HallNode] = ["x", "y"]
    degrees: list[int] = [1, 1]
    for d in range(2, cap + 1):
        found: list[tuple[int, int]] = []
        for a in range(len(nodes)):
            for b in range(len(nodes)):
                if degrees[a] + degrees[b] != d or a >= b:
                    continue
                left_ok = isinstance(nodes[b], str) or nodes[b][0] <= a
                if left_ok:
                    found.append((a, b))
        for a, b in sorted(found):
            nodes.append((a, b))
            degrees.append(d)
    return tuple(nodes), tuple(degrees)


def _expand_node(nodes: Sequence[HallNode], idx: int, cap: int, memo: dict) -> Poly:
    if idx in memo:
        return memo[idx]
    node = nodes[idx]
    if node == "x":
        out: Poly = {(0,): Fraction(1)}
    elif node == "y":
        out = {(1,): Fraction(1)}
    else:
        l, r = node
        pl = _expand_node(nodes, l, cap, memo)
        pr = _expand_node(nodes, r, cap, memo)
        out = _w_add(_w_mul(pl, pr, cap), _w_scale(_w_mul(pr, pl, cap), Fraction(-1)))
    memo[idx] = out
    return out


def _decompose_degree(
    poly: Poly, degree: int, hall_idx: list[int], expansions: dict[int, Poly]
) -> dict[int, Fraction]:
    """Solve the degree-d slice of poly as a combination of Hall expansions."""
    slice_ = {w: c for w, c in poly.items() if len(w) == degree}
    words = sorted(
        set(slice_) | {w for i in hall_idx for w in expansions[i] if len(w) == degree}
    )
    rows = [[expansions[i].get(w, Fraction(0)) for i in hall_idx] for w in words]
    rhs = [slice_.get(w, Fraction(0)) for w in words]
    ncols = len(hall_idx)
    # exact Gaussian elimination on the (overdetermined, consistent) system
    aug = [row + [b] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][col]
        aug[r] = [v / lead for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if len(pivots) != ncols or any(row[-1] for row in aug[r:]):
        raise RFGrowthError("internal", "Hall decomposition failed")
    sol = {hall_idx[c]: aug[i][-1] for i, c in enumerate(pivots)}
    return sol


# -- the table ---------------------------------------------------------------

@dataclass(frozen=True)
class BCHTable:
    """All class-c group-law data: Hall basis, coefficients, constants."""

    nclass: int
    nodes: tuple[HallNode, ...]
    degrees: tuple[int, ...]
    star_coeffs: tuple[Fraction, ...]
    comm_coeffs: tuple[Fraction, ...]
    delta: int
    inv_r: tuple[Fraction, ...]
    inv_s: tuple[Fraction, ...]
    lam: int

    def hall_names(self) -> tuple[str, ...]:
        def render(i: int) -> str:
            node = self.nodes[i]
            if isinstance(node, str):
                return node
            return f"[{render(node[0])},{render(node[1])}]"

        return tuple(render(i) for i in range(len(self.nodes)))

    def f(self, i: int) -> int:
        """The tower f(0) = 1, f(i+1) = (f(i) * lam^c)^c, exact integers."""
        if i < 0:
            raise DomainError("f is defined for i >= 0", reason="bad-index")
        val = 1
        for _ in range(i):
            val = (val * self.lam**self.nclass) ** self.nclass
        return val


@lru_cache(maxsize=None)
def build_bch_table(nclass: int) -> BCHTable:
    """Compute the class-c table symbolically; cached per class."""
    if not (1 <= nclass <= MAX_TABLE_CLASS):
        raise DomainError(
            f"supported classes are 1..{MAX_TABLE_CLASS}", reason="class-cap"
        )
    cap = nclass
    nodes, degrees = _hall_registry(cap)
    memo: dict[int, Poly] = {}
    expansions = {i: _expand_node(nodes, i, cap, memo) for i in range(len(nodes))}

    x_poly: Poly = {(0,): Fraction(1)}
    y_poly: Poly = {(1,): Fraction(1)}
    star_poly = _star_words(x_poly, y_poly, cap)
    comm_poly = _comm_words(x_poly, y_poly, cap)

    def on_hall(poly: Poly) -> list[Fraction]:
        coeffs = [Fraction(0)] * len(nodes)
        for d in range(1, cap + 1):
            idx = [i for i in range(len(nodes)) if degrees[i] == d]
            for i, c in _decompose_degree(poly, d, idx, expansions).items():
                coeffs[i] = c
        # exact reconstruction guard
        recon: Poly = {}
        for i, c in enumerate(coeffs):
            if c:
                recon = _w_add(recon, _w_scale(expansions[i], c))
        if recon != poly:
            raise RFGrowthError("internal", "Hall reconstruction mismatch")
        return coeffs

    star_coeffs = on_hall(star_poly)
    comm_coeffs = on_hall(comm_poly)
    delta = lcm(*[c.denominator for c in star_coeffs + comm_coeffs], 1)

    # group evaluations of the Hall trees: basic commutators kappa_j(x, y)
    kappa: dict[int, Poly] = {0: x_poly, 1: y_poly}
    for i in range(2, len(nodes)):
        l, r = nodes[i]  # type: ignore[misc]
        kappa[i] = _comm_words(kappa[l], kappa[r], cap)

    def peel(remainder: Poly, start_degree: int) -> list[Fraction]:
        """Collect remainder as an ordered product of kappa powers."""
        out = [Fraction(0)] * len(nodes)
        for d in range(start_degree, cap + 1):
            idx = [i for i in range(len(nodes)) if degrees[i] == d]
            coeffs = _decompose_degree(remainder, d, idx, expansions)
            for i in idx:
                a = coeffs.get(i, Fraction(0))
                out[i] = a
                if a:
                    # group power of a Lie element is the scalar multiple
                    inv_pow = _w_scale(kappa[i], -a)
                    remainder = _star_words(inv_pow, remainder, cap)
        if remainder:
            raise RFGrowthError("internal", "inverse collection failed to close")
        return out

    sum_poly = _w_add(x_poly, y_poly)
    r_rem = _star_words(_w_scale(star_poly, Fraction(-1)), sum_poly, cap)
    inv_r = peel(r_rem, 2)

    bracket_poly = expansions[2] if len(nodes) > 2 else {}
    if nclass >= 2:
        s_rem = _star_words(_w_scale(comm_poly, Fraction(-1)), bracket_poly, cap)
        deg2 = {w for w in s_rem if len(w) == 2}
        if deg2:
            raise RFGrowthError("internal", "bracket and commutator differ at degree 2")
        inv_s = peel(s_rem, 3)
    else:
        inv_s = [Fraction(0)] * len(nodes)

    lam = lcm(*[c.denominator for c in inv_r + inv_s], 1)

    return BCHTable(
        nclass=nclass,
        nodes=nodes,
        degrees=degrees,
        star_coeffs=tuple(star_coeffs),
        comm_coeffs=tuple(comm_coeffs),
        delta=delta,
        inv_r=tuple(inv_r),
        inv_s=tuple(inv_s),
        lam=lam,
    )


def inverse_bch(nclass: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...], int, list[int]]:
    """(r exponents, s exponents, lambda, [f(0)..f(c)]) for the class."""
    t = build_bch_table(nclass)
    return t.inv_r, t.inv_s, t.lam, [t.f(i) for i in range(nclass + 1)]


# -- evaluation on a concrete ring -------------------------------------------

def _hall_values(
    L: LieRing, table: BCHTable, u: Sequence[Scalar], v: Sequence[Scalar]
) -> list[list[Scalar]]:
    vals: list[list[Scalar]] = [list(u), list(v)]
    for i in range(2, len(table.nodes)):
        l, r = table.nodes[i]  # type: ignore[misc]
        vals.append(L.bracket(vals[l], vals[r]))
    return vals


def _require_compatible(L: LieRing, table: BCHTable, *vecs: Sequence[Scalar]) -> None:
    if table.nclass < L.nilpotency_class:
        raise DomainError(
            f"table class {table.nclass} below ring class {L.nilpotency_class}",
            reason="class-mismatch",
        )
    for v in vecs:
        if len(v) != L.rank:
            raise DimensionMismatch("vector length differs from ring rank")


def star(
    L: LieRing, table: BCHTable, u: Sequence[Scalar], v: Sequence[Scalar]
) -> list[Fraction]:
    """The exact group product of u and v in the ring's coordinates."""
    _require_compatible(L, table, u, v)
    vals = _hall_values(L, table, u, v)
    out = [Fraction(0)] * L.rank
    for c, vec in zip(table.star_coeffs, vals):
        if c:
            for k in range(L.rank):
                if vec[k]:
                    out[k] += c * vec[k]
    return out


def star_inverse(v: Sequence[Scalar]) -> list[Scalar]:
    """Group inverse; the negative, since powers are scalar multiples."""
    return [-c for c in v]


def group_commutator(
    L: LieRing, table: BCHTable, u: Sequence[Scalar], v: Sequence[Scalar]
) -> list[Fraction]:
    """Commutator u^-1 * v^-1 * u * v, computed two ways and cross-checked."""
    _require_compatible(L, table, u, v)
    vals = _hall_values(L, table, u, v)
    out = [Fraction(0)] * L.rank
    for c, vec in zip(table.comm_coeffs, vals):
        if c:
            for k in range(L.rank):
                if vec[k]:
                    out[k] += c * vec[k]
    direct = star(
        L,
        table,
        star_inverse(u),
        star(L, table, star_inverse(v), star(L, table, u, v)),
    )
    if out != direct:
        raise RFGrowthError("internal", "commutator coefficient table disagrees")
    return out


def as_int_vector(vec: Sequence[Scalar]) -> list[int]:
    """Exact conversion to ints; DomainError when any entry is fractional."""
    out = []
    for c in vec:
        f = Fraction(c)
        if f.denominator != 1:
            raise DomainError(f"non-integral coordinate {c}", reason="non-integral")
        out.append(int(f))
    return out


# -- matrix exp/log oracle ----------------------------------------------------

MatrixQ = list  # list of list of Fraction

MAX_MATRIX_SIZE = 8


def _check_square(M: Sequence[Sequence[Scalar]]) -> int:
    n = len(M)
    if n == 0 or any(len(row) != n for row in M):
        raise DimensionMismatch("matrix must be square and nonempty")
    if n > MAX_MATRIX_SIZE:
        raise DomainError(f"matrix size capped at {MAX_MATRIX_SIZE}", reason="size-cap")
    return n


def _mat_mul(a: MatrixQ, b: MatrixQ) -> MatrixQ:
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]


def mat_exp(M: Sequence[Sequence[Scalar]]) -> MatrixQ:
    """Exact exp of a strictly upper triangular matrix (finite series)."""
    n = _check_square(M)
    A = [[Fraction(c) for c in row] for row in M]
    for i in range(n):
        for j in range(i + 1):
            if A[i][j]:
                raise DomainError(
                    "matrix must be strictly upper triangular", reason="bad-shape"
                )
    out = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    term = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        term = _mat_mul(term, A)
        inv_fact = Fraction(1, factorial(k))
        for i in range(n):
            for j in range(n):
                out[i][j] += inv_fact * term[i][j]
    return out


def mat_log(U: Sequence[Sequence[Scalar]]) -> MatrixQ:
    """Exact log of a unitriangular matrix (finite series)."""
    n = _check_square(U)
    N = [[Fraction(c) for c in row] for row in U]
    for i in range(n):
        for j in range(i + 1):
            expected = 1 if i == j else 0
            if N[i][j] != expected:
                raise DomainError("matrix must be unitriangular", reason="bad-shape")
            N[i][j] -= expected
    out = [[Fraction(0) for _ in range(n)] for _ in range(n)]
    term = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        term = _mat_mul(term, N)
        coef = Fraction((-1) ** (k - 1), k)
        for i in range(n):
            for j in range(n):
                out[i][j] += coef * term[i][j]
    return out


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> MatrixQ:
    """Exact product of two square rational matrices of equal size."""
    n = _check_square(a)
    if _check_square(b) != n:
        raise DimensionMismatch("matrix sizes differ")
    return _mat_mul(
        [[Fraction(c) for c in row] for row in a],
        [[Fraction(c) for c in row] for row in b],
    )
