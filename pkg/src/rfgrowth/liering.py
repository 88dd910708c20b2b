"""Nilpotent Lie rings given by integer structure constants.

A ring of rank n is the free module Z^n with an alternating bilinear bracket
determined by the vectors [e_i, e_j] for i < j (antisymmetry fills in the
rest). Validation enforces the Jacobi identity exactly and requires the lower
central series to reach zero.

Also here: the lower central series with saturated layers, ideal/subring
tests, reduction mod a prime power, the bundled example catalog, and the JSON
ring-file loader used by the CLI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import DimensionMismatch, DomainError
from .lattice import Lattice
from .primes import factor_prime_power

Scalar = Union[int, Fraction]

# rank cap keeps every enumeration in the package desk-scale
MAX_RANK = 12
MAX_CLASS = 6


@dataclass(frozen=True)
class LieRing:
    """Integer structure constants, stored sparsely for pairs i < j (0-based)."""

    rank: int
    constants: tuple[tuple[int, int, tuple[int, ...]], ...]
    name: str = ""

    def __post_init__(self):
        if not (0 < self.rank <= MAX_RANK):
            raise DomainError(f"rank must be in 1..{MAX_RANK}", reason="bad-rank")
        table: dict[tuple[int, int], tuple[int, ...]] = {}
        for i, j, vec in self.constants:
            if not (0 <= i < j < self.rank):
                raise DomainError(f"bad index pair ({i},{j})", reason="bad-format")
            if len(vec) != self.rank:
                raise DimensionMismatch(f"constant vector for ({i},{j}) has wrong length")
            if any(not isinstance(c, int) or isinstance(c, bool) for c in vec):
                raise DomainError("structure constants must be integers", reason="non-integral")
            if (i, j) in table:
                raise DomainError(f"duplicate pair ({i},{j})", reason="bad-format")
            if any(vec):
                table[(i, j)] = tuple(vec)
        object.__setattr__(self, "_table", table)

    @staticmethod
    def build(
        rank: int,
        brackets: Mapping[tuple[int, int], Sequence[int]],
        name: str = "",
    ) -> "LieRing":
        """Construct and fully validate (Jacobi + nilpotency)."""
        consts = tuple(
            (i, j, tuple(int(c) for c in vec)) for (i, j), vec in sorted(brackets.items())
        )
        ring = LieRing(rank, consts, name)
        ring.validate()
        return ring

    # -- bracket ---------------------------------------------------------

    def basis_bracket(self, i: int, j: int) -> tuple[int, ...]:
        if i == j:
            return (0,) * self.rank
        if i < j:
            return self._table.get((i, j), (0,) * self.rank)  # type: ignore[attr-defined]
        return tuple(-c for c in self._table.get((j, i), (0,) * self.rank))  # type: ignore[attr-defined]

    def bracket(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> list[Scalar]:
        """Bilinear extension; exact over ints and Fractions."""
        if len(u) != self.rank or len(v) != self.rank:
            raise DimensionMismatch("bracket operands must have length rank")
        out: list[Scalar] = [0] * self.rank
        for (i, j), vec in self._table.items():  # type: ignore[attr-defined]
            coef = u[i] * v[j] - u[j] * v[i]
            if coef:
                for k, c in enumerate(vec):
                    if c:
                        out[k] += coef * c
        return out

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Jacobi on all basis triples, then nilpotency via the LCS."""
        zero = [0] * self.rank
        e = [[1 if a == b else 0 for b in range(self.rank)] for a in range(self.rank)]
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                for k in range(j + 1, self.rank):
                    total = [
                        a + b + c
                        for a, b, c in zip(
                            self.bracket(self.basis_bracket(i, j), e[k]),
                            self.bracket(self.basis_bracket(j, k), e[i]),
                            self.bracket(self.basis_bracket(k, i), e[j]),
                        )
                    ]
                    if total != zero:
                        raise DomainError(
                            f"Jacobi fails on basis triple ({i},{j},{k})", reason="jacobi"
                        )
        self.lower_central_series()  # raises when the series stalls

    # -- lower central series --------------------------------------------

    def lower_central_series(self) -> "LCS":
        cached = getattr(self, "_lcs", None)
        if cached is not None:
            return cached
        layers = [Lattice.full(self.rank)]
        while True:
            cur = layers[-1]
            images = []
            for g in cur.basis:
                for j in range(self.rank):
                    e_j = [1 if a == j else 0 for a in range(self.rank)]
                    images.append([int(c) for c in self.bracket(g, e_j)])
            nxt = Lattice.from_rows(images, self.rank) if images else Lattice.zero(self.rank)
            if nxt.rank == 0:
                break
            # a nilpotent ring of rank n has class <= n (rational dims strictly drop)
            if len(layers) >= self.rank:
                raise DomainError(
                    "lower central series does not reach zero", reason="not-nilpotent"
                )
            layers.append(nxt)
        lcs = LCS(
            layers=tuple(layers),
            saturated=tuple(l.saturate() for l in layers),
            nclass=len(layers),
        )
        object.__setattr__(self, "_lcs", lcs)
        return lcs

    @property
    def nilpotency_class(self) -> int:
        return self.lower_central_series().nclass

    def derived(self) -> Lattice:
        """gamma_2 = [L, L]."""
        lcs = self.lower_central_series()
        return lcs.layers[1] if lcs.nclass >= 2 else Lattice.zero(self.rank)

    # -- structural tests --------------------------------------------------

    def is_ideal(self, a: Lattice) -> bool:
        """Bracket of every generator with every basis vector stays inside."""
        if a.ambient_rank != self.rank:
            raise DimensionMismatch("lattice ambient rank differs from ring rank")
        e = [[1 if x == y else 0 for y in range(self.rank)] for x in range(self.rank)]
        return all(
            a.member([int(c) for c in self.bracket(g, e_j)]) for g in a.basis for e_j in e
        )

    def is_subring(self, a: Lattice) -> bool:
        if a.ambient_rank != self.rank:
            raise DimensionMismatch("lattice ambient rank differs from ring rank")
        return all(
            a.member([int(c) for c in self.bracket(g, h)])
            for g in a.basis
            for h in a.basis
        )

    def is_coordinate_triangular(self) -> bool:
        """[e_i, e_j] supported on coordinates strictly after max(i, j).

        All catalog rings have this shape; it is what makes star-reduction
        coset counting provably canonical.
        """
        for (i, j), vec in self._table.items():  # type: ignore[attr-defined]
            if any(c and k <= j for k, c in enumerate(vec)):
                return False
        return True

    def reduce_mod(self, q: int) -> "FiniteLieAlgebra":
        pl = factor_prime_power(q)
        if pl is None:
            raise DomainError(f"{q} is not a prime power >= 2", reason="not-prime-power")
        return FiniteLieAlgebra(ring=self, modulus=q, prime=pl[0], exponent=pl[1])


@dataclass(frozen=True)
class LCS:
    """Lower central series: integer layers, their saturations, and the class."""

    layers: tuple[Lattice, ...]
    saturated: tuple[Lattice, ...]
    nclass: int

    def layer(self, i: int) -> Lattice:
        """gamma_i, 1-based; zero lattice past the class."""
        if i < 1:
            raise DomainError("series index starts at 1", reason="bad-index")
        if i > self.nclass:
            return Lattice.zero(self.layers[0].ambient_rank)
        return self.layers[i - 1]

    def saturated_layer(self, i: int) -> Lattice:
        if i < 1:
            raise DomainError("series index starts at 1", reason="bad-index")
        if i > self.nclass:
            return Lattice.zero(self.layers[0].ambient_rank)
        return self.saturated[i - 1]


@dataclass(frozen=True)
class FiniteLieAlgebra:
    """The quotient L/qL for a prime power q, arithmetic done mod q."""

    ring: LieRing
    modulus: int
    prime: int
    exponent: int

    @property
    def rank(self) -> int:
        return self.ring.rank

    def bracket_mod(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return [int(c) % self.modulus for c in self.ring.bracket(list(u), list(v))]


# -- catalog ---------------------------------------------------------------

def _e(k: int, n: int) -> tuple[int, ...]:
    return tuple(1 if a == k else 0 for a in range(n))


def catalog_names() -> list[str]:
    return ["abelian_k", "heisenberg_3", "heisenberg_5", "filiform_4", "free_nilp_2_3"]


def catalog(name: str) -> LieRing:
    """Bundled examples; abelian_k takes the rank from the name (abelian_3)."""
    if name.startswith("abelian_"):
        try:
            k = int(name.split("_", 1)[1])
        except ValueError:
            raise DomainError(f"unknown catalog ring {name!r}", reason="unknown-ring")
        return LieRing.build(k, {}, name=name)
    if name == "heisenberg_3":
        return LieRing.build(3, {(0, 1): _e(2, 3)}, name=name)
    if name == "heisenberg_5":
        return LieRing.build(5, {(0, 1): _e(4, 5), (2, 3): _e(4, 5)}, name=name)
    if name == "filiform_4":
        return LieRing.build(4, {(0, 1): _e(2, 4), (0, 2): _e(3, 4)}, name=name)
    if name == "free_nilp_2_3":
        # class 2 on three generators; e4 = [e1,e2], e5 = [e1,e3], e6 = [e2,e3]
        return LieRing.build(
            6,
            {(0, 1): _e(3, 6), (0, 2): _e(4, 6), (1, 2): _e(5, 6)},
            name=name,
        )
    raise DomainError(f"unknown catalog ring {name!r}", reason="unknown-ring")


def heisenberg_lr() -> LieRing:
    """Heisenberg with doubled center relation [e1,e2] = 2e3; Z^3 is star-closed."""
    return LieRing.build(3, {(0, 1): (0, 0, 2)}, name="heisenberg_lr")


# -- ring file format --------------------------------------------------------

def ring_from_dict(doc: dict) -> LieRing:
    """Parse {"name", "rank", "brackets": [[i, j, [c..]], ...]} (1-based, i<j)."""
    if not isinstance(doc, dict):
        raise DomainError("ring document must be a JSON object", reason="bad-format")
    try:
        rank = int(doc["rank"])
    except (KeyError, TypeError, ValueError):
        raise DomainError("missing or bad 'rank'", reason="bad-format")
    name = str(doc.get("name", ""))
    brackets: dict[tuple[int, int], Sequence[int]] = {}
    for entry in doc.get("brackets", []):
        if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
            raise DomainError("bracket entries must be [i, j, vector]", reason="bad-format")
        i, j, vec = entry
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= rank):
            raise DomainError(f"bad 1-based index pair ({i},{j})", reason="bad-format")
        if not (isinstance(vec, (list, tuple)) and len(vec) == rank):
            raise DomainError(f"bracket vector for ({i},{j}) must have length {rank}", reason="bad-format")
        brackets[(i - 1, j - 1)] = [int(c) for c in vec]
    return LieRing.build(rank, brackets, name=name)


def load_ring(source: str) -> LieRing:
    """Catalog name, else a path to a JSON ring file."""
    if source == "heisenberg_lr":
        return heisenberg_lr()
    try:
        return catalog(source)
    except DomainError as err:
        if err.reason != "unknown-ring":
            raise
    try:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError:
        raise DomainError(
            f"{source!r} is neither a catalog ring nor a readable file",
            reason="unknown-ring",
        )
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON in {source!r}: {exc}", reason="bad-format")
    return ring_from_dict(doc)
