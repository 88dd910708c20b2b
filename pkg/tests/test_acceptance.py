"""End-to-end acceptance gate.

Ten numbered criteria, run in order, each printing a visible PASS/FAIL line
with its runtime. Criteria 4 through 9 build a serialized artifact on first
run; criterion 10 rebuilds every one of them from scratch with the same seeds
and requires the bytes to match.

Tolerances and budgets are pinned here on purpose; loosening them is a
behavior change, not a test fix.
"""

import random
import time
from fractions import Fraction

import pytest

import dynkin_oracle
import subspace_oracle
from rfgrowth.bch import build_bch_table, mat_exp, mat_log, mat_mul
from rfgrowth.correspond import (
    coset_equality_check,
    ideal_to_normal,
    ideal_to_normal_verdicts,
    index_two_ways,
    normal_to_ideal,
    normal_to_ideal_verdicts,
    validate_lr,
    validate_normal_subgroup,
)
from rfgrowth.growth import (
    divisibility,
    fit_exponent,
    rf_profile,
    subring_comparison,
    witness_sequence,
)
from rfgrowth.ideals import delta_sweep, enumerate_ideals
from rfgrowth.lattice import Lattice
from rfgrowth.liering import LieRing, heisenberg_lr, load_ring
from rfgrowth.primes import primes_in_range
from rfgrowth.serialize import (
    canonical_json,
    delta_payload,
    json_document,
    lattice_rows,
    profile_csv,
    profile_payload,
    witness_payload,
)

SEED = 20260818

# artifact cache: criterion number -> serialized bytes from the first run
_ARTIFACTS: dict[int, str] = {}


def _report(capsys, num: int, label: str, elapsed: float, budget: float) -> None:
    with capsys.disabled():
        print(f"PASS criterion {num}: {label} ({elapsed:.2f}s, budget {budget:.0f}s)")
    assert elapsed < budget, f"criterion {num} exceeded its {budget}s budget"


# -- criterion 1: group law vs matrix exponentials -----------------------------------


def _parse_hall_word(name: str, x, y, bracket):
    """Evaluate a bracket word given as text, e.g. '[x,[x,y]]'."""
    if name == "x":
        return x
    if name == "y":
        return y
    assert name.startswith("[") and name.endswith("]")
    depth = 0
    for k, ch in enumerate(name[1:-1], start=1):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            left = _parse_hall_word(name[1:k], x, y, bracket)
            right = _parse_hall_word(name[k + 1 : -1], x, y, bracket)
            return bracket(left, right)
    raise AssertionError(f"unparseable word {name!r}")


def _star_matrices(table, A, B):
    """The group law evaluated on nilpotent matrices via the Hall table."""

    def bracket(u, v):
        return [
            [a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(mat_mul(u, v), mat_mul(v, u))
        ]

    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for name, coeff in zip(table.hall_names(), table.star_coeffs):
        if not coeff:
            continue
        word = _parse_hall_word(name, A, B, bracket)
        for i in range(n):
            for j in range(n):
                out[i][j] += coeff * word[i][j]
    return out


def test_criterion_1_bch_matrix_consistency(capsys):
    t0 = time.monotonic()
    rng = random.Random(SEED)
    table = build_bch_table(3)  # strictly upper 4x4 is nilpotent of class 3

    def rand_matrix():
        M = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                M[i][j] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        return M

    for _ in range(200):
        A, B = rand_matrix(), rand_matrix()
        via_matrices = mat_log(mat_mul(mat_exp(A), mat_exp(B)))
        via_table = _star_matrices(table, A, B)
        assert via_matrices == via_table
    _report(capsys, 1, "group law matches matrix exp/log on 200 pairs",
            time.monotonic() - t0, 10.0)


# -- criterion 2: denominator constants vs the symbolic oracle ------------------------


def test_criterion_2_delta_against_oracle(capsys):
    t0 = time.monotonic()
    assert build_bch_table(2).delta == 2
    t3 = build_bch_table(3)
    assert t3.delta == dynkin_oracle.oracle_delta(3)
    star_oracle = dynkin_oracle.star_coefficients(3)
    comm_oracle = dynkin_oracle.group_commutator_coefficients(3)
    for name, s, c in zip(t3.hall_names(), t3.star_coeffs, t3.comm_coeffs):
        assert s == star_oracle[name]
        assert c == comm_oracle[name]
    _report(capsys, 2, "denominators and coefficients agree with the oracle",
            time.monotonic() - t0, 5.0)


# -- criterion 3: chain enumeration vs all-subspaces filter ---------------------------


def test_criterion_3_enumeration_oracle_equivalence(capsys):
    t0 = time.monotonic()
    small = ["abelian_1", "abelian_2", "abelian_3", "abelian_4",
             "heisenberg_3", "filiform_4"]
    checked = 0
    for name in small:
        L = load_ring(name)
        assert L.rank <= 4
        for p in (2, 3):
            chain = {i.gens for i in enumerate_ideals(L.reduce_mod(p), L.rank)}
            brute = set(subspace_oracle.all_ideals(L, p))
            assert chain == brute, (name, p)
            checked += 1
    _report(capsys, 3, f"chain enumeration equals brute force on {checked} cases",
            time.monotonic() - t0, 60.0)


# -- criterion 4: delta sweep ----------------------------------------------------------


def _run_criterion_4() -> str:
    primes = primes_in_range(2, 31)
    parts = []
    for name, want in (("abelian_3", 1), ("heisenberg_3", 3)):
        rep = delta_sweep(load_ring(name), primes)
        assert rep.stabilized == want
        assert rep.dissenting == ()
        assert all(d == want for _, d, _ in rep.rows)
        parts.append(json_document("delta", name, {"primes": primes, "seed": 0},
                                   delta_payload(rep)))
    return "\n".join(parts)


def test_criterion_4_delta_sweep(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[4] = _run_criterion_4()
    _report(capsys, 4, "delta is 1 on abelian_3 and 3 on heisenberg_3 for p <= 31",
            time.monotonic() - t0, 30.0)


# -- criterion 5: prime-power law and family agreement ---------------------------------


CATALOG_INSTANCES = ["abelian_3", "heisenberg_3", "heisenberg_5",
                     "filiform_4", "free_nilp_2_3"]


def _run_criterion_5() -> str:
    rng = random.Random(SEED)
    rows = []
    for name in CATALOG_INSTANCES:
        L = load_ring(name)
        for _ in range(500):
            v = [rng.randint(-50, 50) for _ in range(L.rank)]
            while not any(v):
                v = [rng.randint(-50, 50) for _ in range(L.rank)]
            r_all = divisibility(L, v, family="all", with_witness=False)
            r_pinf = divisibility(L, v, family="pinf", with_witness=False)
            assert r_all.prime ** r_all.exponent == r_all.value
            assert r_pinf.prime ** r_pinf.exponent == r_pinf.value
            assert r_all.value == r_pinf.value, (name, v)
            rows.append({"ring": name, "vector": v, "value": r_all.value})
    return canonical_json({"kind": "prime-power-law", "seed": SEED, "rows": rows})


def test_criterion_5_prime_power_law(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[5] = _run_criterion_5()
    _report(capsys, 5, "2500 divisibility values are prime powers with ALL == PINF",
            time.monotonic() - t0, 300.0)


# -- criterion 6: witness growth and fitted exponents -----------------------------------


SMALLEST_PRIME_ABOVE = {2: 3, 3: 5, 4: 5, 5: 7, 6: 7, 7: 11, 8: 11, 9: 11,
                        10: 11, 11: 13, 12: 13}


def _run_criterion_6() -> str:
    H = load_ring("heisenberg_3")
    steps = witness_sequence(H, [0, 0, 1], 12)
    tail = [s for s in steps if s.step >= 2]
    for s in tail:
        q = SMALLEST_PRIME_ABOVE[s.step]
        assert s.usable_prime == q
        assert s.value == q**3, (s.step, s.value)
    fit = fit_exponent(tail)
    assert not fit.degenerate
    assert abs(fit.slope - 3.0) <= 0.01

    A = load_ring("abelian_1")
    a_steps = witness_sequence(A, [1], 12)
    a_fit = fit_exponent([s for s in a_steps if s.step >= 2])
    assert abs(a_fit.slope - 1.0) <= 0.01

    return "\n".join([
        json_document("witness", "heisenberg_3",
                      {"dir": [0, 0, 1], "lmax": 12, "x": 1, "family": "p1"},
                      witness_payload(steps, fit)),
        json_document("witness", "abelian_1",
                      {"dir": [1], "lmax": 12, "x": 1, "family": "p1"},
                      witness_payload(a_steps, a_fit)),
    ])


def test_criterion_6_witness_growth(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[6] = _run_criterion_6()
    _report(capsys, 6, "central direction grows like q^3, abelian like q",
            time.monotonic() - t0, 60.0)


# -- criteria 7 and 8: the two correspondence directions --------------------------------


def _random_ideals(count: int, seed: int):
    """Seeded finite-index ideals of the certified Heisenberg ring."""
    L = heisenberg_lr()
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rows = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        lat = Lattice.from_rows(rows, 3)
        if lat.rank != 3:
            continue
        idx = lat.index_in(Lattice.full(3))
        if idx is None or idx > 60:
            continue
        # close under bracketing with the basis; stays finite index
        units = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        while True:
            images = [L.bracket(list(g), u) for g in lat.basis for u in units]
            grown = lat.add(Lattice.from_rows([[int(c) for c in w] for w in images], 3))
            if grown == lat:
                break
            lat = grown
        assert L.is_ideal(lat)
        out.append(lat)
    return out


def _run_criterion_7() -> str:
    G = validate_lr(heisenberg_lr())
    results = []
    for I in _random_ideals(25, SEED):
        S = ideal_to_normal(G, I)
        verdicts = ideal_to_normal_verdicts(G, I, S)
        assert [name for name, _ in verdicts] == [
            "ideal", "star-closed", "sandwich", "index-bound",
        ]
        assert all(ok for _, ok in verdicts)
        two = index_two_ways(G, S)
        assert two.lattice_index == two.group_index
        assert coset_equality_check(G, S, samples=50, seed=0).ok
        results.append({
            "input": lattice_rows(I),
            "result": lattice_rows(S),
            "verdicts": {name: ok for name, ok in verdicts},
            "index": two.lattice_index,
        })
    return canonical_json({"kind": "correspond-forward", "seed": SEED,
                           "results": results})


def test_criterion_7_ideal_to_normal(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[7] = _run_criterion_7()
    _report(capsys, 7, "25 random ideals translate with all verdicts and equal indices",
            time.monotonic() - t0, 120.0)


def _run_criterion_8() -> str:
    G = validate_lr(heisenberg_lr())
    table = build_bch_table(G.ring.nilpotency_class)
    random_normal = ideal_to_normal(G, _random_ideals(1, SEED + 1)[0])
    cases = [Lattice.full(3), Lattice.full(3).scale(2), random_normal]
    results = []
    for S in cases:
        N = validate_normal_subgroup(G, S)
        out = normal_to_ideal(G, N)  # raises internally if closure fails the cap
        verdicts = normal_to_ideal_verdicts(G, N, out, table.f)
        assert all(ok for _, ok in verdicts), verdicts
        results.append({
            "input": lattice_rows(S),
            "result": lattice_rows(out),
            "verdicts": {name: ok for name, ok in verdicts},
        })
    return canonical_json({"kind": "correspond-backward", "seed": SEED + 1,
                           "results": results})


def test_criterion_8_normal_to_ideal(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[8] = _run_criterion_8()
    _report(capsys, 8, "closure stabilizes and verdicts pass on L, 2L, random N",
            time.monotonic() - t0, 120.0)


# -- criterion 9: subring comparison ------------------------------------------------------


def _run_criterion_9() -> str:
    H = load_ring("heisenberg_3")
    bound = Fraction(64)
    parts = []
    for rows, index in (
        ([[2, 0, 0], [0, 1, 0], [0, 0, 1]], 2),
        ([[2, 0, 0], [0, 2, 0], [0, 0, 2]], 8),
    ):
        cmp = subring_comparison(H, Lattice.from_rows(rows, 3), 6)
        assert cmp.index == index
        assert cmp.ratio_sup <= bound
        assert cmp.ratio_inf >= 1 / bound
        parts.append(profile_csv(cmp.ambient, seed=0))
        parts.append(profile_csv(cmp.sub, seed=0))
        parts.append(canonical_json({
            "kind": "subring-comparison",
            "index": index,
            "ratio_sup": str(cmp.ratio_sup),
            "ratio_inf": str(cmp.ratio_inf),
        }))
    return "\n".join(parts)


def test_criterion_9_subring_invariance(capsys):
    t0 = time.monotonic()
    _ARTIFACTS[9] = _run_criterion_9()
    _report(capsys, 9, "profile ratios of index-2 and index-8 subrings stay within 64",
            time.monotonic() - t0, 300.0)


# -- criterion 10: determinism --------------------------------------------------------------


def test_criterion_10_determinism(capsys):
    t0 = time.monotonic()
    builders = {4: _run_criterion_4, 5: _run_criterion_5, 6: _run_criterion_6,
                7: _run_criterion_7, 8: _run_criterion_8, 9: _run_criterion_9}
    for num, build in builders.items():
        first = _ARTIFACTS.get(num) or build()
        again = build()
        assert first == again, f"criterion {num} artifact changed between runs"
    _report(capsys, 10, "criteria 4-9 reproduce byte-identical artifacts",
            time.monotonic() - t0, 600.0)
