"""Command-line surface: shapes, determinism, exit codes, side files."""

import json

import pytest
from click.testing import CliRunner

from rfgrowth.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args):
    res = runner.invoke(main, args)
    assert res.exit_code == 0, res.output
    return res.output


# -- determinism ---------------------------------------------------------------


def test_repeated_invocations_byte_identical(runner):
    args = ["growth", "--ring", "heisenberg_3", "--rmax", "4", "--family", "p1"]
    assert run_ok(runner, args) == run_ok(runner, args)
    args = ["delta", "--ring", "heisenberg_3", "--primes", "2..13"]
    assert run_ok(runner, args) == run_ok(runner, args)


def test_output_ends_with_newline_and_sorted_keys(runner):
    out = run_ok(runner, ["delta", "--ring", "abelian_3", "--primes", "2,3,5"])
    assert out.endswith("}\n")
    doc = json.loads(out)
    assert list(doc) == sorted(doc)


# -- delta ----------------------------------------------------------------------


def test_delta_values(runner):
    doc = json.loads(run_ok(runner, ["delta", "--ring", "heisenberg_3", "--primes", "2..31"]))
    assert doc["kind"] == "delta"
    assert doc["ring"] == "heisenberg_3"
    assert doc["stabilized"] == 3
    assert doc["dissenting"] == []
    assert len(doc["rows"]) == 11
    assert all(r["delta_p"] == 3 for r in doc["rows"])
    doc = json.loads(run_ok(runner, ["delta", "--ring", "abelian_3", "--primes", "2..31"]))
    assert doc["stabilized"] == 1


def test_delta_elapsed_only_with_timings(runner):
    plain = json.loads(run_ok(runner, ["delta", "--ring", "abelian_2", "--primes", "2,3"]))
    assert "elapsed_ms" not in plain
    timed = json.loads(
        run_ok(runner, ["delta", "--ring", "abelian_2", "--primes", "2,3", "--timings"])
    )
    assert isinstance(timed["elapsed_ms"], int)


# -- growth -----------------------------------------------------------------------


def test_growth_json(runner):
    doc = json.loads(
        run_ok(
            runner,
            ["growth", "--ring", "heisenberg_3", "--rmax", "6", "--family", "p1"],
        )
    )
    assert doc["kind"] == "growth"
    assert doc["family"] == "p1" and doc["length"] == "guivarch"
    assert [(r["radius"], r["maxD"]) for r in doc["rows"]] == [
        (1, 8), (2, 27), (3, 125), (4, 125), (5, 125), (6, 343),
    ]
    assert doc["rows"][5]["witness"] == [0, 0, 30]


def test_growth_csv_to_stdout(runner):
    out = run_ok(
        runner,
        [
            "growth", "--ring", "abelian_1", "--rmax", "4",
            "--family", "all", "--length", "norm", "--csv", "-",
        ],
    )
    lines = out.strip().split("\n")
    assert lines[0] == (
        "# rfgrowth profile schema=1 tool=0.1.0 ring=abelian_1 "
        "family=all length=norm rmax=4 seed=0"
    )
    assert lines[1] == "radius,maxD,prime,exponent,witness"
    assert lines[2] == "1,2,2,1,1"
    assert len(lines) == 6


def test_growth_csv_to_file(runner, tmp_path):
    target = tmp_path / "profile.csv"
    out = run_ok(
        runner,
        ["growth", "--ring", "abelian_1", "--rmax", "3", "--csv", str(target)],
    )
    # csv to a file replaces the stdout report unless --json asks for both
    assert out == ""
    text = target.read_text()
    assert text.startswith("# rfgrowth profile schema=1")
    assert text.count("\n") == 5
    both = run_ok(
        runner,
        ["growth", "--ring", "abelian_1", "--rmax", "3", "--csv", str(target), "--json"],
    )
    assert json.loads(both)["kind"] == "growth"


def test_growth_plot_file(runner, tmp_path):
    target = tmp_path / "profile.png"
    run_ok(
        runner,
        ["growth", "--ring", "abelian_1", "--rmax", "3", "--plot", str(target)],
    )
    assert target.exists() and target.stat().st_size > 0


def test_growth_rejects_bad_family(runner):
    res = runner.invoke(main, ["growth", "--ring", "abelian_1", "--rmax", "3", "--family", "p2"])
    assert res.exit_code == 2


def test_growth_ball_cap_errors_as_json(runner):
    res = runner.invoke(
        main,
        ["growth", "--ring", "heisenberg_3", "--rmax", "50", "--cap", "100"],
    )
    assert res.exit_code == 1
    doc = json.loads(res.output)
    assert doc["error"] == "ball-cap"


# -- witness ------------------------------------------------------------------------


def test_witness_default_direction(runner):
    doc = json.loads(run_ok(runner, ["witness", "--ring", "heisenberg_3", "--lmax", "6"]))
    assert doc["direction"] == [0, 0, 1]
    assert [s["value"] for s in doc["steps"]] == [8, 27, 125, 125, 343, 343]
    assert abs(doc["fit"]["slope"] - 3.0) < 0.05


def test_witness_explicit_direction_and_family(runner):
    doc = json.loads(
        run_ok(
            runner,
            ["witness", "--ring", "abelian_1", "--dir", "1", "--lmax", "5", "--family", "all"],
        )
    )
    assert doc["direction"] == [1]
    assert doc["comparison_note"] == "sampled values only; no asymptotic claim"
    for row in doc["p1_comparison"]:
        assert row["equal"] == (row["p1_value"] == row["all_value"])


def test_witness_no_fit_below_four_steps(runner):
    doc = json.loads(run_ok(runner, ["witness", "--ring", "heisenberg_3", "--lmax", "3"]))
    assert "fit" not in doc
    assert len(doc["steps"]) == 3


# -- correspond ------------------------------------------------------------------------


def test_correspond_to_normal(runner):
    doc = json.loads(
        run_ok(
            runner,
            [
                "correspond", "--ring", "heisenberg_lr",
                "--ideal", "2,0,0;0,2,0;0,0,2", "--direction", "to-normal",
            ],
        )
    )
    assert doc["result"] == [[4, 0, 0], [0, 4, 0], [0, 0, 2]]
    assert doc["constants"] == {"class": 2, "delta": 2, "lam": 2}
    assert doc["verdicts"] == {
        "ideal": True, "star-closed": True, "sandwich": True, "index-bound": True,
    }
    assert doc["coset_equality"]["ok"] is True
    assert doc["indices"] == {"lattice": 32, "group": 32}


def test_correspond_to_ideal(runner):
    doc = json.loads(
        run_ok(
            runner,
            [
                "correspond", "--ring", "heisenberg_lr",
                "--ideal", "2,0,0;0,2,0;0,0,2", "--direction", "to-ideal",
            ],
        )
    )
    assert doc["result"] == [[32, 0, 0], [0, 32, 0], [0, 0, 2]]
    assert doc["constants"]["f"] == [1, 16]
    assert doc["indices"] == {"lattice": 2048, "group": 2048}


def test_correspond_rejects_uncertified_ring(runner):
    res = runner.invoke(
        main,
        [
            "correspond", "--ring", "heisenberg_3",
            "--ideal", "1,0,0;0,1,0;0,0,1", "--direction", "to-normal",
        ],
    )
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "not-star-closed"


# -- bch-table ---------------------------------------------------------------------------


def test_bch_table_class_two(runner):
    doc = json.loads(run_ok(runner, ["bch-table", "--class", "2"]))
    assert doc["hall_words"] == ["x", "y", "[x,y]"]
    assert doc["star_coefficients"] == ["1", "1", "1/2"]
    assert doc["commutator_coefficients"] == ["0", "0", "1"]
    assert doc["delta"] == 2 and doc["lam"] == 2


def test_bch_table_class_three(runner):
    doc = json.loads(run_ok(runner, ["bch-table", "--class", "3"]))
    assert doc["hall_words"] == ["x", "y", "[x,y]", "[x,[x,y]]", "[y,[x,y]]"]
    assert doc["star_coefficients"] == ["1", "1", "1/2", "1/12", "-1/12"]
    assert doc["delta"] == 12


def test_bch_table_bad_class(runner):
    res = runner.invoke(main, ["bch-table", "--class", "7"])
    assert res.exit_code == 1
    assert "error" in json.loads(res.output)


# -- catalog and validate ------------------------------------------------------------------


def test_catalog(runner):
    doc = json.loads(run_ok(runner, ["catalog"]))
    names = [r["name"] for r in doc["rings"]]
    assert names == [
        "abelian_k", "heisenberg_3", "heisenberg_5", "filiform_4", "free_nilp_2_3",
    ]
    assert doc["extras"] == ["heisenberg_lr"]


def test_validate_catalog_ring(runner):
    doc = json.loads(run_ok(runner, ["validate", "--ring", "filiform_4"]))
    assert doc["ok"] is True
    assert doc["rank"] == 4 and doc["class"] == 3
    assert doc["triangular"] is True


def test_validate_ring_file(runner, tmp_path):
    good = tmp_path / "ring.json"
    good.write_text(
        json.dumps({"name": "h", "rank": 3, "brackets": [[1, 2, [0, 0, 2]]]})
    )
    doc = json.loads(run_ok(runner, ["validate", "--ring", str(good)]))
    assert doc["ok"] is True and doc["class"] == 2

    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "name": "broken",
                "rank": 3,
                "brackets": [[1, 2, [0, 0, 1]], [1, 3, [1, 0, 0]]],
            }
        )
    )
    res = runner.invoke(main, ["validate", "--ring", str(bad)])
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "jacobi"


def test_unknown_ring(runner):
    res = runner.invoke(main, ["delta", "--ring", "nosuchring", "--primes", "2,3"])
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "unknown-ring"


def test_malformed_primes_is_usage_error(runner):
    res = runner.invoke(main, ["delta", "--ring", "abelian_1", "--primes", "2..x"])
    assert res.exit_code == 2
