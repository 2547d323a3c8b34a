import csv
import json

import pytest

from covert_spc import cli
from covert_spc.covertness import (
    avg_detection_error_approx,
    avg_detection_error_quadrature,
    avg_kl_lower_bound,
)
from covert_spc.model import SystemParams
from covert_spc.reliability import avg_decoding_error


def run(argv, tmp_path, name="out.txt"):
    out = tmp_path / name
    code = cli.main(argv + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_analyze_schema_and_library_equality(tmp_path):
    code, text = run(["analyze", "--P-a", "1", "--R", "1", "--n", "100"], tmp_path)
    assert code == 0
    rec = json.loads(text)
    p = SystemParams()
    assert rec["xi_exact"] == avg_detection_error_quadrature(p, 1.0, 100)
    assert rec["xi_approx"] == avg_detection_error_approx(p, 1.0, 100)
    assert rec["xi_kl"] == avg_kl_lower_bound(p, 1.0, 100)
    assert rec["delta"] == avg_decoding_error(p, 1.0, 1.0, 100)
    assert rec["eta"] == 100 * 1.0 * (1 - rec["delta"])
    for k in ("xi_exact", "xi_approx", "xi_kl", "delta"):
        assert 0 <= rec[k] <= 1


def test_analyze_no_transmission(tmp_path):
    _, text = run(["analyze", "--P-a", "0"], tmp_path)
    rec = json.loads(text)
    assert rec["xi_exact"] == rec["xi_approx"] == rec["xi_kl"] == 1.0


def test_malformed_scenario_names_field(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"lambda_ab": 0.05, "gain": 3}))
    code, _ = run(["analyze", "--scenario", str(bad)], tmp_path)
    assert code == 2
    assert "gain" in capsys.readouterr().err
    bad.write_text(json.dumps({"phi": 3}))
    code, _ = run(["analyze", "--scenario", str(bad)], tmp_path)
    assert code == 2
    assert "phi" in capsys.readouterr().err
    bad.write_text("{not json")
    assert run(["analyze", "--scenario", str(bad)], tmp_path)[0] == 2


def test_scenario_is_used(tmp_path):
    sc = tmp_path / "s.json"
    sc.write_text(json.dumps({"P_w": 0}))
    _, text = run(["analyze", "--scenario", str(sc)], tmp_path)
    rec = json.loads(text)
    assert rec["xi_exact"] == avg_detection_error_quadrature(SystemParams(P_w=0), 1.0, 100)


def test_sweep_two_points_roundtrip(tmp_path):
    code, text = run(["sweep", "--var", "P_a", "--start", "0.1", "--stop", "5", "--points", "2"], tmp_path)
    assert code == 0
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["P_a", "xi_exact", "xi_approx", "xi_kl", "delta", "eta"]
    assert len(rows) == 3
    # shortest round-trip repr: parsing recovers the library value exactly
    assert float(rows[2][1]) == avg_detection_error_quadrature(SystemParams(), 5.0, 100)


def test_sweep_fig2_monotone(tmp_path):
    _, text = run(
        ["sweep", "--var", "P_a", "--start", "0.1", "--stop", "5", "--points", "8", "--metrics", "xi_exact"],
        tmp_path,
    )
    xi = [float(r["xi_exact"]) for r in csv.DictReader(text.splitlines())]
    assert all(a >= b for a, b in zip(xi, xi[1:]))


def test_sweep_log_and_integer_n(tmp_path):
    _, text = run(
        ["sweep", "--var", "n", "--start", "50", "--stop", "200", "--points", "4", "--log", "--metrics", "eta_opt,eta_fixed"],
        tmp_path,
    )
    rows = list(csv.DictReader(text.splitlines()))
    assert [r["n"] for r in rows] == ["50", "79", "126", "200"]


def test_sweep_frontier_metric(tmp_path):
    _, text = run(
        ["sweep", "--var", "epsilon", "--start", "0.05", "--stop", "0.3", "--points", "3", "--metrics", "kappa_min"],
        tmp_path,
    )
    k = [float(r["kappa_min"]) for r in csv.DictReader(text.splitlines())]
    assert k[0] >= k[1] >= k[2]


def test_sweep_usage_errors(tmp_path):
    assert run(["sweep", "--var", "P_a", "--start", "1", "--stop", "2", "--points", "2", "--metrics", "bogus"], tmp_path)[0] == 2
    assert run(["sweep", "--var", "P_a", "--start", "2", "--stop", "1", "--points", "2"], tmp_path)[0] == 2
    assert run(["sweep", "--var", "P_a", "--start", "1", "--stop", "2", "--points", "1"], tmp_path)[0] == 2


def test_optimize_defaults_recheck(tmp_path):
    code, text = run(["optimize", "--n-min", "90", "--n-max", "100"], tmp_path)
    assert code == 0
    rec = json.loads(text)
    assert rec["feasible"] is True
    best = rec["best"]
    _, check = run(
        ["analyze", "--P-a", repr(best["P_a_star"]), "--R", repr(best["R_star"]), "--n", str(best["n"])],
        tmp_path,
        "check.txt",
    )
    chk = json.loads(check)
    assert chk["xi_exact"] >= 0.9 - 1e-6
    assert chk["delta"] <= 0.1 + 1e-6
    assert len(rec["trace"]) == 11


def test_optimize_degenerate_and_infeasible(tmp_path):
    _, text = run(["optimize", "--n-min", "100", "--n-max", "100"], tmp_path)
    assert len(json.loads(text)["trace"]) == 1
    code, text = run(["optimize", "--epsilon", "1e-9", "--n-min", "50", "--n-max", "51"], tmp_path)
    assert code == 0
    rec = json.loads(text)
    assert isinstance(rec["feasible"], bool) and len(rec["trace"]) == 2


def test_simulate_outputs(tmp_path):
    args = ["simulate", "--trials", "5000", "--seed", "4"]
    code, a = run(args, tmp_path, "a.txt")
    _, b = run(args, tmp_path, "b.txt")
    assert code == 0 and a == b
    rec = json.loads(a)
    assert set(rec) == {"mode", "mean", "std_err", "trials", "seed", "std_err_degenerate"}
    _, one = run(["simulate", "--trials", "1"], tmp_path)
    rec = json.loads(one)
    assert rec["std_err"] == 0.0 and rec["std_err_degenerate"] is True
    assert run(["simulate", "--mode", "psychic"], tmp_path)[0] == 2


def test_simulate_consistent_with_analyze(tmp_path):
    _, sim = run(["simulate", "--trials", "100000", "--seed", "12"], tmp_path, "sim.txt")
    _, ana = run(["analyze"], tmp_path, "ana.txt")
    s, a = json.loads(sim), json.loads(ana)
    assert abs(s["mean"] - a["xi_exact"]) <= 3 * s["std_err"] + 0.005


def test_stdout_default(capsys):
    assert cli.main(["analyze", "--n", "50"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 50
