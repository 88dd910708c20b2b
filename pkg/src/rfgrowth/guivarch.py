"""Weighted coordinates adapted to the lower central series.

A decomposition picks an integral complement a_i of the saturated layer i+1
inside the saturated layer i; the union of the a_i bases is a basis of the
ambient module (the quotients are torsion-free, so complements always exist).
A vector's weighted length gives its layer-i component exponent 1/i; all
comparisons against a radius are done through integer powers, never roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Iterator, Sequence

from .errors import DomainError, RFGrowthError
from .lattice import Lattice, Matrix, invert_unimodular
from .liering import LieRing, Scalar


@dataclass(frozen=True)
class GuivarchDecomposition:
    ring: LieRing
    complements: tuple[Lattice, ...]  # a_1 .. a_c
    stacked: tuple[tuple[int, ...], ...]  # rows: a_1 basis, then a_2, ...
    stacked_inv: tuple[tuple[int, ...], ...]
    row_layer: tuple[int, ...]  # 1-based layer index per stacked row

    @property
    def nclass(self) -> int:
        return len(self.complements)

    def coordinates(self, v: Sequence[Scalar]) -> list[Scalar]:
        """Coefficients of v over the stacked basis (exact; ints stay ints)."""
        n = self.ring.rank
        if len(v) != n:
            raise DomainError("vector length differs from ring rank", reason="dimension")
        inv = self.stacked_inv
        return [sum(v[k] * inv[k][r] for k in range(n)) for r in range(n)]

    def layer_norms(self, v: Sequence[Scalar]) -> list[Scalar]:
        """Max absolute stacked coordinate per layer, layers 1..c."""
        coords = self.coordinates(v)
        norms: list[Scalar] = [0] * self.nclass
        for c, layer in zip(coords, self.row_layer):
            a = -c if c < 0 else c
            if a > norms[layer - 1]:
                norms[layer - 1] = a
        return norms

    def within_radius(self, v: Sequence[Scalar], r) -> bool:
        """Exact test: layer-i norm <= r^i for every layer."""
        r = Fraction(r)
        if r < 0:
            return False
        return all(norm <= r**i for i, norm in enumerate(self.layer_norms(v), start=1))

    def length_float(self, v: Sequence[Scalar]) -> float:
        """max_i (layer norm)^(1/i), for display only; comparisons stay exact."""
        return max(
            (float(norm) ** (1.0 / i) for i, norm in enumerate(self.layer_norms(v), 1)),
            default=0.0,
        )

    def min_integer_radius(self, v: Sequence[Scalar]) -> int:
        """Smallest integer r with every layer norm <= r^i."""
        best = 0
        for i, norm in enumerate(self.layer_norms(v), start=1):
            best = max(best, _integer_root_ceil(norm, i))
        return best


def _integer_root_ceil(m, i: int) -> int:
    """Least r >= 0 with r^i >= m, exact for int or Fraction m."""
    if m <= 0:
        return 0
    if i == 1:
        num = Fraction(m)
        return -((-num.numerator) // num.denominator)  # ceil
    r = max(1, int(float(m) ** (1.0 / i)))
    while r**i >= m:
        r -= 1
        if r == 0:
            break
    while r**i < m:
        r += 1
    return r


def guivarch_decomposition(L: LieRing) -> GuivarchDecomposition:
    """Build complements from the saturated series; basis is unimodular."""
    lcs = L.lower_central_series()
    n = L.rank
    complements: list[Lattice] = []
    rows: Matrix = []
    row_layer: list[int] = []
    for i in range(1, lcs.nclass + 1):
        below = (
            lcs.saturated_layer(i + 1) if i < lcs.nclass else Lattice.zero(n)
        )
        comp = below.complement_in(lcs.saturated_layer(i))
        complements.append(comp)
        for row in comp.basis:
            rows.append(list(row))
            row_layer.append(i)
    if len(rows) != n:
        raise RFGrowthError("internal", "complement ranks do not add up")
    inv = invert_unimodular(rows)
    return GuivarchDecomposition(
        ring=L,
        complements=tuple(complements),
        stacked=tuple(tuple(r) for r in rows),
        stacked_inv=tuple(tuple(r) for r in inv),
        row_layer=tuple(row_layer),
    )


# -- ball enumeration ---------------------------------------------------------

def guivarch_ball_size(dec: GuivarchDecomposition, radius: int) -> int:
    """Number of nonzero lattice vectors with weighted length <= radius."""
    total = 1
    for layer in dec.row_layer:
        total *= 2 * radius**layer + 1
    return total - 1


def iter_guivarch_ball(
    dec: GuivarchDecomposition, radius: int, cap: int
) -> Iterator[list[int]]:
    """Nonzero integer vectors with weighted length <= radius, box order."""
    size = guivarch_ball_size(dec, radius)
    if size > cap:
        raise DomainError(
            f"ball of estimated size {size} exceeds cap {cap}", reason="ball-cap"
        )
    ranges = [range(-(radius**layer), radius**layer + 1) for layer in dec.row_layer]
    stacked = dec.stacked
    n = dec.ring.rank
    for coords in iter_product(*ranges):
        if not any(coords):
            continue
        yield [
            sum(coords[r] * stacked[r][k] for r in range(n)) for k in range(n)
        ]


def norm_ball_size(rank: int, radius: int) -> int:
    return (2 * radius + 1) ** rank - 1


def iter_norm_ball(rank: int, radius: int, cap: int) -> Iterator[list[int]]:
    """Nonzero integer vectors with max coordinate <= radius."""
    size = norm_ball_size(rank, radius)
    if size > cap:
        raise DomainError(
            f"ball of estimated size {size} exceeds cap {cap}", reason="ball-cap"
        )
    for coords in iter_product(range(-radius, radius + 1), repeat=rank):
        if any(coords):
            yield list(coords)


def min_norm_radius(v: Sequence[int]) -> int:
    return max(abs(c) for c in v)
