"""Tests for the approx-stable command line."""

import json
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from approx_stable._cli import (
    EXIT_LIMIT,
    EXIT_OK,
    EXIT_UNSTABLE,
    EXIT_USAGE,
    RunConfig,
    cmd_check,
    cmd_gen,
    generate,
    main,
    parse_params,
)


def _gen(tmp_path: Path, family: str, params: str = "") -> Path:
    out = tmp_path / f"{family}.json"
    args = ["gen", "--family", family, "--out", str(out)]
    if params:
        args += ["--params", params]
    assert main(args) == EXIT_OK
    return out


def test_check_stable_matching(tmp_path: Path) -> None:
    """Verifies exit 0 for a 2-stable matching of the crossing market."""
    market = _gen(tmp_path, "crossing")
    matching = tmp_path / "mu.json"
    matching.write_text('{"pairs": [["d1", "h1"], ["d3", "h1"], ["d2", "h2"]]}')
    args = ["check", "--market", str(market), "--matching", str(matching)]
    assert main([*args, "--alpha", "2"]) == EXIT_OK
    assert main([*args, "--alpha", "1.5"]) == EXIT_UNSTABLE


def test_enumerate_coverage_market(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """Verifies "none" and exit 3 below (1 + sqrt 17) / 4."""
    market = _gen(tmp_path, "coverage")
    status = main(
        ["enumerate", "--market", str(market), "--alpha", "1.28", "--format", "table"]
    )
    assert status == EXIT_UNSTABLE
    assert "none" in capsys.readouterr().out.splitlines()


def test_enumerate_matroid_lower_bound(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """Verifies that the k = 2 lower-bound market has no 1.9-stable matching."""
    market = _gen(tmp_path, "matroid-lb", "k=2")
    capsys.readouterr()
    assert main(["enumerate", "--market", str(market), "--alpha", "1.9"]) == 3
    assert json.loads(capsys.readouterr().out)["witness"] == "none"


def test_solve_then_min_alpha(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """Verifies that solve writes a matching and trace that min-alpha reads."""
    market = _gen(tmp_path, "crossing", "rendering=matroid_pair")
    matching, trace = tmp_path / "mu.json", tmp_path / "trace.json"
    status = main(
        [
            "solve",
            "--market",
            str(market),
            "--tie-break",
            "lifo",
            "--trace",
            str(trace),
            "--out",
            str(matching),
        ]
    )
    assert status == EXIT_OK
    assert json.loads(trace.read_text())["rounds"] >= 4
    capsys.readouterr()
    args = ["min-alpha", "--market", str(market), "--matching", str(matching)]
    assert main(args) == EXIT_OK
    assert float(capsys.readouterr().out) <= 2.0


def test_pack(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Verifies the packing command on a subset of doctors."""
    market = _gen(tmp_path, "crossing")
    capsys.readouterr()
    status = main(
        ["pack", "--market", str(market), "--hospital", "h1", "--doctors", "d2,d3,d4"]
    )
    assert status == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {
        "chosen": ["d2", "d4"],
        "value": 2.0,
    }


def test_bench_writes_csv(tmp_path: Path) -> None:
    """Verifies the benchmark CSV for one cell."""
    out = tmp_path / "bench.csv"
    status = main(
        [
            "bench",
            "--cells",
            "card-1matroid",
            "--seeds",
            "2",
            "--n",
            "4",
            "--m",
            "2",
            "--workers",
            "1",
            "--out",
            str(out),
        ]
    )
    assert status == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("instance,algorithm")
    assert len(lines) == 3


def test_missing_required_option() -> None:
    """Verifies exit 1 when a command lacks an input."""
    assert main(["check", "--alpha", "2"]) == EXIT_USAGE


def test_usage_error_exits_one() -> None:
    """Verifies that argparse errors exit with status 1."""
    with pytest.raises(SystemExit) as excinfo:
        main(["solve", "--alg", "magic"])
    assert excinfo.value.code == EXIT_USAGE


def test_parse_error_exits_one(tmp_path: Path) -> None:
    """Verifies exit 1 on an invalid market file."""
    market = tmp_path / "bad.json"
    market.write_text('{"doctors": []}')
    assert main(["solve", "--market", str(market)]) == EXIT_USAGE


@patch.dict(os.environ, {"APPROX_STABLE_ORACLE_LIMIT": "10"})
def test_oracle_limit_exits_two(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    """Verifies exit 2 and a message naming the module and limit."""
    market = _gen(tmp_path, "crossing")
    assert main(["enumerate", "--market", str(market), "--alpha", "2"]) == EXIT_LIMIT
    assert "stability: assignment space" in caplog.text
    assert "limit of 10" in caplog.text


def test_parse_params() -> None:
    """Verifies key=value parsing."""
    assert parse_params("k=2, eps=0.3") == {"k": "2", "eps": "0.3"}
    assert parse_params(None) == {}
    with pytest.raises(ValueError, match="expected key=value"):
        parse_params("k")


def test_generate_families() -> None:
    """Verifies every family and parameter validation."""
    assert generate("typed", {"n": "4", "m": "2"}).n_doctors == 4
    assert generate("overlap", {"k": "2"}).n_hospitals == 2
    assert generate("budget", {"n": "3"}, seed=1).n_doctors == 3
    assert generate("refugee", {"services": "3"}, seed=1).n_hospitals == 2
    assert generate("random", {"n": "5", "constraint": "knapsack"}).n_doctors == 5
    assert generate("knapsack-lb", {}).n_doctors == 7
    with pytest.raises(ValueError, match="unknown parameter"):
        generate("coverage", {"k": "2"})
    with pytest.raises(ValueError, match="must be an integer"):
        generate("matroid-lb", {"k": "two"})
    with pytest.raises(ValueError, match="Unknown family"):
        generate("lattice", {})


def test_numbered_family_names(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    """Verifies that the numbered family names reach the same generators."""
    market = _gen(tmp_path, "thm62", "k=2")
    capsys.readouterr()
    status = main(
        ["enumerate", "--market", str(market), "--alpha", "1.9", "--format", "table"]
    )
    assert status == EXIT_UNSTABLE
    assert "none" in capsys.readouterr().out.splitlines()
    for alias, family in [
        ("example1", "crossing"),
        ("example2", "coverage"),
        ("thm63", "knapsack-lb"),
    ]:
        assert _gen(tmp_path, alias).read_text() == _gen(tmp_path, family).read_text()


def test_commands_reject_incomplete_configs(tmp_path: Path) -> None:
    """Verifies a ValueError naming the option a hand-built config lacks."""
    market = _gen(tmp_path, "crossing")
    with pytest.raises(ValueError, match="--matching"):
        cmd_check(RunConfig(command="check", market=market, alpha=2.0))
    with pytest.raises(ValueError, match="--family"):
        cmd_gen(RunConfig(command="gen"))
