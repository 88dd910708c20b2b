"""Exact integer lattice algebra: HNF, SNF, kernels, and subgroup operations.

Everything here is pure ``int`` arithmetic. No floats enter this module, so
results are exact and runs are bit-reproducible. Matrices are lists of lists
of ints (rows); the public container is the immutable :class:`Lattice`.

Conventions:
  * HNF is row-style: each pivot is positive, entries above a pivot are
    reduced into ``[0, pivot)``, zero rows are dropped, rows are ordered by
    pivot column. The HNF rows are the canonical basis of the row span.
  * ``index`` of a sublattice is the product of its SNF divisors relative to
    the ambient/ super lattice, or ``None`` when the quotient is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DimensionMismatch, DomainError

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``g == a*x + b*y``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _check_int_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    out: Matrix = []
    width = None
    for row in rows:
        row = list(row)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DimensionMismatch("ragged matrix: rows of unequal length")
        for v in row:
            # bool is an int subclass but never a legitimate coordinate here
            if not isinstance(v, int) or isinstance(v, bool):
                raise DomainError(f"non-integer entry {v!r}", reason="non-integral")
        out.append(row)
    return out


def hnf(rows: Matrix, ambient: Optional[int] = None) -> Matrix:
    """Row-style Hermite normal form of the row span. Zero rows dropped."""
    h, _ = hnf_transform(rows, ambient=ambient, want_transform=False)
    return h


def hnf_transform(
    rows: Matrix, ambient: Optional[int] = None, want_transform: bool = True
) -> tuple[Matrix, Optional[Matrix]]:
    """HNF plus (optionally) a unimodular ``U`` with ``U @ rows == [H; 0]``.

    The returned transform has the rows producing H first, then the rows
    producing zeros (a basis of the left kernel of ``rows``).
    """
    a = _check_int_matrix(rows)
    m = len(a)
    if ambient is not None:
        for row in a:
            if len(row) != ambient:
                raise DimensionMismatch(
                    f"row length {len(row)} != ambient rank {ambient}"
                )
    n = len(a[0]) if a else (ambient or 0)
    u: Optional[Matrix] = None
    if want_transform:
        u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    pivot_rows: list[int] = []
    row_at = 0
    for col in range(n):
        # find a nonzero entry at or below row_at in this column
        pivot = None
        for r in range(row_at, m):
            if a[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != row_at:
            a[row_at], a[pivot] = a[pivot], a[row_at]
            if u is not None:
                u[row_at], u[pivot] = u[pivot], u[row_at]
        for r in range(row_at + 1, m):
            if not a[r][col]:
                continue
            # one-shot 2x2 unimodular combination kills a[r][col]
            g, x, y = xgcd(a[row_at][col], a[r][col])
            p, q = a[row_at][col] // g, a[r][col] // g
            ra, rb = a[row_at], a[r]
            a[row_at] = [x * s + y * t for s, t in zip(ra, rb)]
            a[r] = [-q * s + p * t for s, t in zip(ra, rb)]
            if u is not None:
                ua, ub = u[row_at], u[r]
                u[row_at] = [x * s + y * t for s, t in zip(ua, ub)]
                u[r] = [-q * s + p * t for s, t in zip(ua, ub)]
        if a[row_at][col] < 0:
            a[row_at] = [-s for s in a[row_at]]
            if u is not None:
                u[row_at] = [-s for s in u[row_at]]
        # reduce entries above the pivot into [0, pivot)
        piv = a[row_at][col]
        for r in range(row_at):
            q = a[r][col] // piv
            if q:
                a[r] = [s - q * t for s, t in zip(a[r], a[row_at])]
                if u is not None:
                    u[r] = [s - q * t for s, t in zip(u[r], u[row_at])]
        pivot_rows.append(row_at)
        row_at += 1

    h = [a[r] for r in pivot_rows]
    if u is not None:
        # rows past row_at combine to zero; keep them after the H-producing rows
        u = [u[r] for r in pivot_rows] + [u[r] for r in range(row_at, m)]
    return h, u


def left_kernel(rows: Matrix) -> Matrix:
    """Basis (HNF) of ``{v : v @ rows == 0}`` as rows."""
    a = _check_int_matrix(rows)
    if not a:
        return []
    _, u = hnf_transform(a)
    assert u is not None
    rank = len(hnf(a))
    ker = u[rank:]
    return hnf(ker, ambient=len(a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a[0])}-wide by {len(b)}-tall")
    return [
        [sum(ra[k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]) if b else 0)]
        for ra in a
    ]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def snf_divisors(rows: Matrix) -> list[int]:
    d, _, _ = snf_transform(rows, want_transforms=False)
    return d


def snf_transform(
    rows: Matrix, want_transforms: bool = True
) -> tuple[list[int], Optional[Matrix], Optional[Matrix]]:
    """Smith normal form: divisors ``d`` plus unimodular ``U, V`` with
    ``U @ rows @ V == diag(d)`` (padded with zeros). Divisors are positive and
    each divides the next.
    """
    a = _check_int_matrix(rows)
    m = len(a)
    n = len(a[0]) if a else 0
    u: Optional[Matrix] = None
    v: Optional[Matrix] = None
    if want_transforms:
        u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i: int, j: int, x: int, y: int, p: int, q: int) -> None:
        ri, rj = a[i], a[j]
        a[i] = [x * s + y * t for s, t in zip(ri, rj)]
        a[j] = [-q * s + p * t for s, t in zip(ri, rj)]
        if u is not None:
            ui, uj = u[i], u[j]
            u[i] = [x * s + y * t for s, t in zip(ui, uj)]
            u[j] = [-q * s + p * t for s, t in zip(ui, uj)]

    def col_op(i: int, j: int, x: int, y: int, p: int, q: int) -> None:
        for row in a:
            s, t = row[i], row[j]
            row[i] = x * s + y * t
            row[j] = -q * s + p * t
        if v is not None:
            for row in v:
                s, t = row[i], row[j]
                row[i] = x * s + y * t
                row[j] = -q * s + p * t

    divisors: list[int] = []
    k = 0
    while k < m and k < n:
        # move a nonzero entry to (k, k)
        found = False
        for i in range(k, m):
            for j in range(k, n):
                if a[i][j]:
                    found = True
                    if i != k:
                        a[k], a[i] = a[i], a[k]
                        if u is not None:
                            u[k], u[i] = u[i], u[k]
                    if j != k:
                        for row in a:
                            row[k], row[j] = row[j], row[k]
                        if v is not None:
                            for row in v:
                                row[k], row[j] = row[j], row[k]
                    break
            if found:
                break
        if not found:
            break
        # alternate clearing row and column k until both are clean; a plain
        # shear suffices when the pivot divides the entry, and otherwise the
        # gcd rotation strictly shrinks the pivot, so the alternation stops
        while True:
            for i in range(k + 1, m):
                t = a[i][k]
                if t:
                    piv = a[k][k]
                    if t % piv == 0:
                        q = t // piv
                        a[i] = [s - q * w for s, w in zip(a[i], a[k])]
                        if u is not None:
                            u[i] = [s - q * w for s, w in zip(u[i], u[k])]
                    else:
                        g, x, y = xgcd(piv, t)
                        row_op(k, i, x, y, piv // g, t // g)
            for j in range(k + 1, n):
                t = a[k][j]
                if t:
                    piv = a[k][k]
                    if t % piv == 0:
                        q = t // piv
                        for row in a:
                            row[j] -= q * row[k]
                        if v is not None:
                            for row in v:
                                row[j] -= q * row[k]
                    else:
                        g, x, y = xgcd(piv, t)
                        col_op(k, j, x, y, piv // g, t // g)
            if all(not a[i][k] for i in range(k + 1, m)) and all(
                not a[k][j] for j in range(k + 1, n)
            ):
                break
        # enforce divisibility of later entries by a[k][k]
        piv = a[k][k]
        bad = None
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if a[i][j] % piv:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            # fold the offending row into row k and redo this pivot
            a[k] = [s + t for s, t in zip(a[k], a[bad])]
            if u is not None:
                u[k] = [s + t for s, t in zip(u[k], u[bad])]
            continue
        if piv < 0:
            a[k] = [-s for s in a[k]]
            if u is not None:
                u[k] = [-s for s in u[k]]
        divisors.append(a[k][k])
        k += 1
    return divisors, u, v


def invert_unimodular(mat: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DimensionMismatch("unimodular inverse needs a square matrix")
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(mat)]
    h, _ = hnf_transform(aug, want_transform=False)
    if len(h) != n or any(h[i][i] != 1 for i in range(n)):
        raise DomainError("matrix is not unimodular", reason="not-unimodular")
    # HNF of [M | I] with unit pivots is [I | M^-1]
    for i in range(n):
        for j in range(n):
            if h[i][j] != (1 if i == j else 0):
                raise DomainError("matrix is not unimodular", reason="not-unimodular")
    return [row[n:] for row in h]


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^ambient_rank, stored by its canonical HNF basis rows."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], ambient_rank: int) -> "Lattice":
        h = hnf([list(r) for r in rows], ambient=ambient_rank)
        return Lattice(ambient_rank, tuple(tuple(r) for r in h))

    @staticmethod
    def full(ambient_rank: int) -> "Lattice":
        eye = [[1 if i == j else 0 for j in range(ambient_rank)] for i in range(ambient_rank)]
        return Lattice(ambient_rank, tuple(tuple(r) for r in eye))

    @staticmethod
    def zero(ambient_rank: int) -> "Lattice":
        return Lattice(ambient_rank, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rows(self) -> Matrix:
        return [list(r) for r in self.basis]

    def _require_same_ambient(self, other: "Lattice") -> None:
        if self.ambient_rank != other.ambient_rank:
            raise DimensionMismatch(
                f"ambient ranks differ: {self.ambient_rank} vs {other.ambient_rank}"
            )

    def member(self, vec: Sequence[int]) -> bool:
        try:
            self.coordinates(vec)
        except DomainError:
            return False
        return True

    def coordinates(self, vec: Sequence[int]) -> list[int]:
        """Coefficients of ``vec`` over the HNF basis; DomainError if outside."""
        v = _check_int_matrix([list(vec)])[0]
        if len(v) != self.ambient_rank:
            raise DimensionMismatch(
                f"vector length {len(v)} != ambient rank {self.ambient_rank}"
            )
        coords: list[int] = []
        v = list(v)
        for row in self.basis:
            col = next(j for j, s in enumerate(row) if s)
            q, r = divmod(v[col], row[col])
            if r:
                raise DomainError("vector not in lattice", reason="not-a-member")
            coords.append(q)
            v = [s - q * t for s, t in zip(v, row)]
        if any(v):
            raise DomainError("vector not in lattice", reason="not-a-member")
        return coords

    def add(self, other: "Lattice") -> "Lattice":
        self._require_same_ambient(other)
        return Lattice.from_rows(self.rows() + other.rows(), self.ambient_rank)

    def intersect(self, other: "Lattice") -> "Lattice":
        """Exact intersection via the left kernel of the stacked bases."""
        self._require_same_ambient(other)
        a, b = self.rows(), other.rows()
        if not a or not b:
            return Lattice.zero(self.ambient_rank)
        ker = left_kernel(a + b)
        out = [
            [sum(w[i] * a[i][j] for i in range(len(a))) for j in range(self.ambient_rank)]
            for w in ker
        ]
        return Lattice.from_rows(out, self.ambient_rank)

    def scale(self, k: int) -> "Lattice":
        return Lattice.from_rows([[k * s for s in row] for row in self.basis], self.ambient_rank)

    def contains_lattice(self, other: "Lattice") -> bool:
        self._require_same_ambient(other)
        return all(self.member(row) for row in other.basis)

    def index_in(self, sup: "Lattice") -> Optional[int]:
        """``[sup : self]`` as a positive int, or None when infinite."""
        self._require_same_ambient(sup)
        if not sup.contains_lattice(self):
            raise DomainError("index_in: not a sublattice", reason="not-a-sublattice")
        if self.rank < sup.rank:
            return None
        coords = [sup.coordinates(row) for row in self.basis]
        div = snf_divisors(coords)
        out = 1
        for d in div:
            out *= d
        return out

    def saturate(self) -> "Lattice":
        """Smallest sublattice containing self whose quotient is torsion-free."""
        if not self.basis:
            return self
        ker = left_kernel(transpose(self.rows()))
        if not ker:
            return Lattice.full(self.ambient_rank)
        return Lattice.from_rows(left_kernel(transpose(ker)), self.ambient_rank)

    def complement_in(self, sup: "Lattice") -> "Lattice":
        """A lattice C with ``self + C == sup`` and ``self ∩ C == 0``.

        Exists iff ``sup/self`` is torsion-free; DomainError otherwise.
        """
        self._require_same_ambient(sup)
        if not sup.contains_lattice(self):
            raise DomainError("complement_in: not a sublattice", reason="not-a-sublattice")
        sup_rows = sup.rows()
        if not self.basis:
            return sup
        coords = [sup.coordinates(row) for row in self.basis]
        div, _, v = snf_transform(coords)
        if any(d != 1 for d in div):
            raise DomainError(
                "quotient has torsion; no direct complement", reason="torsion-quotient"
            )
        v_inv = invert_unimodular(v)  # type: ignore[arg-type]
        k = len(div)
        comp_coords = v_inv[k:]
        comp = [
            [sum(c[i] * sup_rows[i][j] for i in range(len(sup_rows))) for j in range(self.ambient_rank)]
            for c in comp_coords
        ]
        return Lattice.from_rows(comp, self.ambient_rank)
