import csv
import json

import numpy as np
import pytest

from lazyrates import cli
from lazyrates.errors import NumericalConsistencyError
from lazyrates.linop import BipartiteSpace, projector
from lazyrates.sampler import SeededRng, gue_hamiltonian, haar_pure_state
from lazyrates.serialize import save_operator

RUNS = {
    "rate": ["rate", "--ds", "2", "--de", "4", "--seed", "3"],
    "concentration": ["concentration", "--ds", "2", "--de", "16", "--samples", "50", "--seed", "3",
                      "--statistic", "hrate", "--threshold", "main-2", "--convention", "proof"],
    "bounds": ["bounds", "--ds", "8", "--de", "64", "--json"],
    "decouple": ["decouple", "--ds", "2", "--de", "8", "--samples", "50", "--seed", "3"],
    "sweep": ["sweep", "--ds", "2", "--de", "4,16", "--samples", "30", "--seed", "3"],
}


def _run(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k != "runtime_seconds"}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


@pytest.mark.parametrize("name", sorted(RUNS))
def test_subcommands_deterministic(capsys, name):
    code1, out1, _ = _run(capsys, RUNS[name])
    code2, out2, _ = _run(capsys, RUNS[name])
    assert code1 == code2 == 0
    a, b = json.loads(out1), json.loads(out2)
    assert json.dumps(_strip(a)) == json.dumps(_strip(b))
    # the raw text differs at most in the runtime lines
    lines1 = [l for l in out1.splitlines() if "runtime_seconds" not in l]
    lines2 = [l for l in out2.splitlines() if "runtime_seconds" not in l]
    assert lines1 == lines2


def test_seed_changes_output(capsys):
    _, a, _ = _run(capsys, RUNS["concentration"])
    argv = list(RUNS["concentration"])
    argv[argv.index("--seed") + 1] = "4"
    _, b, _ = _run(capsys, argv)
    assert json.loads(a)["mean_statistic"] != json.loads(b)["mean_statistic"]


def test_bounds_table(capsys):
    code, out, _ = _run(capsys, ["bounds", "--ds", "2", "--de", "4096"])
    assert code == 0 and "proof_consistent" in out and "set2" in out


def test_config_errors_exit_2(capsys):
    for argv in (["concentration", "--ds", "1", "--de", "4", "--samples", "5"],
                 ["concentration", "--ds", "2", "--de", "4", "--threshold", "nope"],
                 ["concentration", "--ds", "2", "--de", "4", "--spectrum", "0.5,0.6"],
                 ["rate", "--ds", "2", "--de", "4096"],
                 ["sweep", "--ds", "2", "--de", "4,x"]):
        code, _, err = _run(capsys, argv)
        assert code == 2 and "configuration error" in err


def test_numerical_error_exit_3(capsys, monkeypatch):
    def boom(cfg):
        raise NumericalConsistencyError("fast and dense differ")

    monkeypatch.setattr(cli, "run_concentration", boom)
    code, _, err = _run(capsys, RUNS["concentration"])
    assert code == 3 and "numerical error" in err


def test_assert_exit_4(capsys, monkeypatch):
    from lazyrates.harness import run_concentration
    from dataclasses import replace

    def failing(cfg):
        return replace(run_concentration(cfg), regime="non-vacuous", bound_satisfied=False)

    monkeypatch.setattr(cli, "run_concentration", failing)
    assert _run(capsys, RUNS["concentration"])[0] == 0
    assert _run(capsys, RUNS["concentration"] + ["--assert"])[0] == 4


def test_assert_passes_for_vacuous_and_satisfied(capsys):
    code, out, _ = _run(capsys, ["concentration", "--ds", "2", "--de", "16", "--samples", "50",
                                 "--threshold", "main-1", "--statistic", "hrate", "--assert"])
    assert code == 0 and json.loads(out)["regime"].startswith("vacuous")


def test_csv_append(capsys, tmp_path):
    path = tmp_path / "out.csv"
    _run(capsys, RUNS["concentration"] + ["--csv", str(path)])
    _run(capsys, RUNS["sweep"] + ["--csv", str(path)])
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 3
    assert rows[0]["statistic"] == "worst_case_entropy_rate"
    assert path.read_text().count("d_E") == 1


def test_rate_from_files(capsys, tmp_path):
    sp = BipartiteSpace(2, 3)
    r = SeededRng(5)
    save_operator(tmp_path / "psi.json", haar_pure_state(6, r), sp)
    save_operator(tmp_path / "h.json", gue_hamiltonian(6, r), sp)
    code, out, _ = _run(capsys, ["rate", "--ds", "2", "--de", "3", "--state", str(tmp_path / "psi.json"),
                                 "--hamiltonian", str(tmp_path / "h.json"), "--strength", "delta"])
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["strength_measure"] == "delta" and rep["universal_bound_ok"]
    save_operator(tmp_path / "rho.json", projector(haar_pure_state(8, r)), BipartiteSpace(2, 4))
    code, _, err = _run(capsys, ["rate", "--ds", "2", "--de", "3", "--state", str(tmp_path / "rho.json")])
    assert code == 2


def test_decouple_reports_min_entropy(capsys):
    code, out, _ = _run(capsys, RUNS["decouple"])
    data = json.loads(out)
    assert code == 0 and data["extra"]["choi_cond_hmin"] == pytest.approx(2.0, abs=1e-6)
    assert data["threshold_used"] == pytest.approx(0.5 + np.sqrt(2 / 8), abs=1e-6)
