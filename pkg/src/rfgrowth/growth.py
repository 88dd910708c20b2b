"""Divisibility values, residual-growth profiles, and witness sequences.

The divisibility value of a nonzero vector v is the least index of a
finite-index ideal avoiding v, minimized within a family:

  * ``p1``: ideals containing pL for a prime p (codimension search mod p),
  * ``pinf``: ideals of prime-power index,
  * ``all``: every finite-index ideal.

Every finite-index ideal contains one of prime-power index with index
dividing a power of any prime factor, so the ``all`` optimum is always
attained at a prime power and must equal the ``pinf`` optimum. The two
searches are nevertheless run with different loop structures (per-prime
pruned descent vs a single global ascending scan), which keeps the equality
an actual cross-check of the pruning logic rather than a tautology.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, DomainError
from .guivarch import (
    guivarch_decomposition,
    iter_guivarch_ball,
    iter_norm_ball,
    min_norm_radius,
)
from .ideals import lattice_cache, modp_cache
from .lattice import Lattice
from .liering import LieRing
from .primes import factor_prime_power, next_prime, smallest_prime_not_dividing

FAMILIES = ("p1", "pinf", "all")
LENGTHS = ("guivarch", "norm")

DEFAULT_BALL_CAP = 2_000_000


@dataclass(frozen=True)
class DivisibilityResult:
    value: int
    prime: int
    exponent: int
    family: str
    witness: Optional[Lattice]


def _content(v: Sequence[int]) -> int:
    return math.gcd(*(abs(int(c)) for c in v))


def _check_vector(L: LieRing, v: Sequence[int]) -> list[int]:
    w = [int(c) for c in v]
    if len(w) != L.rank:
        raise DimensionMismatch(f"vector length {len(w)} != rank {L.rank}")
    if not any(w):
        raise DomainError("the zero vector lies in every ideal", reason="zero-vector")
    return w


def divisibility(
    L: LieRing, v: Sequence[int], family: str = "all", with_witness: bool = True
) -> DivisibilityResult:
    """Least index of an ideal in the given family avoiding v."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}", reason="unknown-family")
    w = _check_vector(L, v)
    g = _content(w)
    n = L.rank
    p0 = smallest_prime_not_dividing(g)
    # p0 * L avoids v because some coordinate of v is not divisible by p0
    value, prime, exp = p0**n, p0, n
    pending = None  # (kind, payload) for deferred witness construction

    if family == "p1":
        p = 2
        while p < value:
            if g % p:
                cache = modp_cache(L, p)
                d = 1
                while p**d < value:
                    if not cache.contains_at(d, w):
                        value, prime, exp = p**d, p, d
                        pending = ("modp", cache)
                        break
                    d += 1
            p = next_prime(p)
    elif family == "pinf":
        p = 2
        while p < value:
            cache = lattice_cache(L, p)
            j = 1
            while p**j < value:
                if not cache.level_meet(j).member(w):
                    value, prime, exp = p**j, p, j
                    pending = ("lattice", cache)
                    break
                j += 1
            p = next_prime(p)
    else:
        q = 2
        while q < value:
            pl = factor_prime_power(q)
            if pl is not None:
                p, j = pl
                cache = lattice_cache(L, p)
                if not cache.level_meet(j).member(w):
                    value, prime, exp = q, p, j
                    pending = ("lattice", cache)
                    break
            q += 1

    witness: Optional[Lattice] = None
    if with_witness:
        if pending is None:
            witness = Lattice.full(n).scale(p0)
        elif pending[0] == "modp":
            rows = pending[1].first_avoiding_ideal(exp, w)
            scaled = [[prime if i == j else 0 for j in range(n)] for i in range(n)]
            witness = Lattice.from_rows([list(r) for r in rows] + scaled, n)
        else:
            witness = pending[1].first_avoider(exp, w)
    return DivisibilityResult(
        value=value, prime=prime, exponent=exp, family=family, witness=witness
    )


# -- growth profiles -----------------------------------------------------------

@dataclass(frozen=True)
class ProfileRow:
    radius: int
    value: int
    prime: int
    exponent: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class GrowthProfile:
    ring_name: str
    family: str
    length: str
    r_max: int
    rows: tuple[ProfileRow, ...]


def _witness_key(v: Sequence[int]) -> tuple:
    return (tuple(abs(c) for c in v), tuple(c < 0 for c in v))


def _thread_count() -> int:
    raw = os.environ.get("RFGROWTH_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


_WORKER: dict = {}


def _profile_worker_init(ring: LieRing, family: str) -> None:
    _WORKER["ring"] = ring
    _WORKER["family"] = family


def _profile_worker(vec: Sequence[int]) -> tuple[int, int, int]:
    res = divisibility(_WORKER["ring"], vec, _WORKER["family"], with_witness=False)
    return res.value, res.prime, res.exponent


def rf_profile(
    L: LieRing,
    r_max: int,
    family: str = "p1",
    length: str = "guivarch",
    cap: int = DEFAULT_BALL_CAP,
) -> GrowthProfile:
    """Max divisibility value over balls of radius 1..r_max, with witnesses."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}", reason="unknown-family")
    if length not in LENGTHS:
        raise DomainError(f"unknown length {length!r}", reason="unknown-length")
    if r_max < 1:
        raise DomainError("radius must be at least 1", reason="bad-radius")
    if length == "guivarch":
        dec = guivarch_decomposition(L)
        vectors = [tuple(v) for v in iter_guivarch_ball(dec, r_max, cap)]
        radius_of = dec.min_integer_radius
    else:
        vectors = [tuple(v) for v in iter_norm_ball(L.rank, r_max, cap)]
        radius_of = min_norm_radius

    threads = _thread_count()
    if threads > 1 and len(vectors) >= 4 * threads:
        chunk = max(1, len(vectors) // (threads * 8))
        with ProcessPoolExecutor(
            max_workers=threads,
            initializer=_profile_worker_init,
            initargs=(L, family),
        ) as ex:
            triples = list(ex.map(_profile_worker, vectors, chunksize=chunk))
    else:
        triples = [
            (r.value, r.prime, r.exponent)
            for r in (
                divisibility(L, v, family, with_witness=False) for v in vectors
            )
        ]

    buckets: dict[int, list[tuple[tuple, tuple[int, ...], tuple[int, int, int]]]] = {}
    for v, t in zip(vectors, triples):
        buckets.setdefault(radius_of(v), []).append((_witness_key(v), v, t))

    rows = []
    best: Optional[tuple[int, int, int]] = None
    best_witness: Optional[tuple[int, ...]] = None
    for r in range(1, r_max + 1):
        for key, v, (val, p, e) in sorted(buckets.get(r, [])):
            if best is None or val > best[0]:
                best = (val, p, e)
                best_witness = v
        if best is not None:
            assert best_witness is not None
            rows.append(
                ProfileRow(
                    radius=r,
                    value=best[0],
                    prime=best[1],
                    exponent=best[2],
                    witness=best_witness,
                )
            )
    return GrowthProfile(
        ring_name=L.name, family=family, length=length, r_max=r_max, rows=tuple(rows)
    )


# -- witness sequences along a direction ----------------------------------------

@dataclass(frozen=True)
class WitnessStep:
    step: int
    scalar: int
    vector: tuple[int, ...]
    usable_prime: int
    value: int
    prime: int
    exponent: int


@dataclass(frozen=True)
class ExponentFit:
    slope: Optional[float]
    intercept: Optional[float]
    points: int
    degenerate: bool


def witness_sequence(
    L: LieRing, v: Sequence[int], l_max: int, x: int = 1, family: str = "p1"
) -> tuple[WitnessStep, ...]:
    """Divisibility of x * lcm(1..l) * v for l = 1..l_max.

    The scalar wipes out every ideal of index <= l, so the first usable prime
    grows with l and the value against it exposes the direction's exponent.
    """
    w = _check_vector(L, v)
    if l_max < 1:
        raise DomainError("need at least one step", reason="bad-input")
    if x < 1:
        raise DomainError("the extra factor must be positive", reason="bad-input")
    base = _content(w)
    steps = []
    for l in range(1, l_max + 1):
        scal = x * math.lcm(*range(1, l + 1))
        vec = tuple(scal * c for c in w)
        res = divisibility(L, list(vec), family, with_witness=False)
        steps.append(
            WitnessStep(
                step=l,
                scalar=scal,
                vector=vec,
                usable_prime=smallest_prime_not_dividing(scal * base),
                value=res.value,
                prime=res.prime,
                exponent=res.exponent,
            )
        )
    return tuple(steps)


def fit_exponent(steps: Sequence[WitnessStep]) -> ExponentFit:
    """Least-squares slope of log(value) against log(usable prime)."""
    if len(steps) < 4:
        raise DomainError("need at least 4 points to fit", reason="too-few-points")
    xs = [math.log(s.usable_prime) for s in steps]
    ys = [math.log(s.value) for s in steps]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((a - xbar) ** 2 for a in xs)
    if sxx == 0.0:
        return ExponentFit(slope=None, intercept=None, points=len(steps), degenerate=True)
    slope = sum((a - xbar) * (b - ybar) for a, b in zip(xs, ys)) / sxx
    return ExponentFit(
        slope=slope, intercept=ybar - slope * xbar, points=len(steps), degenerate=False
    )


# -- profile comparison under a finite-index subring -----------------------------

@dataclass(frozen=True)
class SubringComparison:
    ambient: GrowthProfile
    sub: GrowthProfile
    index: int
    ratio_sup: Fraction
    ratio_inf: Fraction


def subring_restrict(L: LieRing, sub: Lattice, name: str = "") -> LieRing:
    """The bracket structure of a finite-index subring in its own basis."""
    if sub.ambient_rank != L.rank:
        raise DimensionMismatch("sublattice lives in a different ambient module")
    if sub.rank != L.rank:
        raise DomainError("subring comparison needs finite index", reason="infinite-index")
    if not L.is_subring(sub):
        raise DomainError("lattice is not closed under the bracket", reason="not-a-subring")
    brackets = {}
    rows = sub.rows()
    for i in range(L.rank):
        for j in range(i + 1, L.rank):
            vec = sub.coordinates([int(c) for c in L.bracket(rows[i], rows[j])])
            if any(vec):
                brackets[(i, j)] = vec
    return LieRing.build(L.rank, brackets, name=name or f"{L.name}-sub")


def subring_comparison(
    L: LieRing,
    sub: Lattice,
    r_max: int,
    family: str = "p1",
    length: str = "guivarch",
    cap: int = DEFAULT_BALL_CAP,
) -> SubringComparison:
    """Profiles of a ring and a finite-index subring over the same radii."""
    inner = subring_restrict(L, sub)
    index = sub.index_in(Lattice.full(L.rank))
    assert index is not None
    ambient = rf_profile(L, r_max, family=family, length=length, cap=cap)
    inner_prof = rf_profile(inner, r_max, family=family, length=length, cap=cap)
    ratios = [
        Fraction(a.value, b.value) for a, b in zip(ambient.rows, inner_prof.rows)
    ]
    if not ratios:
        raise DomainError("profiles came back empty", reason="bad-radius")
    return SubringComparison(
        ambient=ambient,
        sub=inner_prof,
        index=index,
        ratio_sup=max(ratios),
        ratio_inf=min(ratios),
    )
