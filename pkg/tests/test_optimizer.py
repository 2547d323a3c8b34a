import numpy as np
import pytest

from covert_spc.covertness import avg_detection_error_quadrature
from covert_spc.model import Constraints
from covert_spc.optimizer import (
    InnerSolution,
    OptimizationResult,
    effective_throughput,
    golden_section_max,
    optimize,
    rate_upper_bound,
    solve_covert_power,
    solve_rate,
    throughput_optimal_rate,
)
from covert_spc.reliability import R_MIN, avg_decoding_error


def eta_at(params, P_a, R, n):
    return effective_throughput(n, R, avg_decoding_error(params, P_a, R, n))


def test_effective_throughput():
    assert effective_throughput(100, 1.0, 0.0) == 100
    assert effective_throughput(100, 1.0, 1.0) == 0
    assert effective_throughput(100, 1.0, 0.1) == pytest.approx(90)


def test_golden_section_on_parabola():
    x = golden_section_max(lambda r: -(r - 0.7) ** 2, 0.0, 3.0)
    assert x == pytest.approx(0.7, abs=1e-6)
    assert golden_section_max(lambda r: r, 0.0, 1.0) == pytest.approx(1.0, abs=1e-6)


def test_covert_power_slack_constraint(params, constraints, quad):
    loose = constraints.replace(epsilon=0.999999)
    assert solve_covert_power(params, 100, loose, quad) == loose.P_a_max


def test_covert_power_root(params, constraints, quad):
    P = solve_covert_power(params, 100, constraints, quad)
    if P < constraints.P_a_max:
        assert abs(avg_detection_error_quadrature(params, P, 100, quad) - 0.9) <= 1e-6
    passive = solve_covert_power(params.replace(P_w=0.0), 100, constraints, quad)
    assert P >= passive


def test_covert_power_approx_method(params, constraints, quad):
    exact = solve_covert_power(params, 100, constraints, quad, "exact")
    approx = solve_covert_power(params, 100, constraints, quad, "approx")
    assert approx == pytest.approx(exact, rel=0.05)
    with pytest.raises(ValueError):
        solve_covert_power(params, 100, constraints, quad, "bogus")


def test_rate_interior_optimum(params, constraints):
    loose = constraints.replace(kappa=0.999)
    R, eta, binding = solve_rate(params, 2.5, 100, loose)
    assert binding == ("rate-opt",)
    h = 1e-4
    deriv = (eta_at(params, 2.5, R + h, 100) - eta_at(params, 2.5, R - h, 100)) / (2 * h)
    assert abs(deriv) < 1e-3 * eta


def test_rate_reliability_cap(params, constraints):
    R, eta, binding = solve_rate(params, 2.5, 100, constraints)
    assert binding == ("reliability",)
    assert avg_decoding_error(params, 2.5, R, 100) == pytest.approx(constraints.kappa, abs=1e-6)


@pytest.mark.parametrize("kappa", [0.1, 0.999])
def test_rate_beats_grid(params, constraints, kappa):
    cons = constraints.replace(kappa=kappa)
    R, eta, _ = solve_rate(params, 2.5, 100, cons)
    grid = np.linspace(R_MIN, rate_upper_bound(params, 2.5), 1000)
    vals = [
        eta_at(params, 2.5, r, 100)
        for r in grid
        if avg_decoding_error(params, 2.5, r, 100) <= kappa
    ]
    assert eta >= max(vals) - 1e-3 * eta


def test_rate_infeasible_flag(params, constraints):
    tight = constraints.replace(kappa=1e-6)
    assert solve_rate(params, 0.01, 100, tight) is None
    assert solve_rate(params, 0.0, 100, constraints) is None


def test_degenerate_window(params, constraints, quad):
    res = optimize(params, constraints.replace(n_min=100, n_max=100), quad)
    assert isinstance(res, OptimizationResult)
    assert len(res.trace) == 1 and res.best.n == 100


def test_optimize_consistency_and_determinism(params, constraints, quad):
    cons = constraints.replace(n_min=60, n_max=70)
    a = optimize(params, cons, quad)
    b = optimize(params, cons, quad, workers=4)
    assert a == b
    feasible = [s for s in a.trace if s.feasible]
    assert a.best.eta == max(s.eta for s in feasible)
    for s in feasible:
        assert s.P_a_star <= cons.P_a_max + 1e-9
        assert avg_detection_error_quadrature(params, s.P_a_star, s.n, quad) >= 1 - cons.epsilon - 1e-6
        assert avg_decoding_error(params, s.P_a_star, s.R_star, s.n) <= cons.kappa + 1e-6
        assert cons.n_min <= s.n <= cons.n_max


def test_all_infeasible(params, quad):
    cons = Constraints(epsilon=1e-9, kappa=1e-9, n_min=50, n_max=52)
    res = optimize(params, cons, quad)
    assert not res.feasible and res.best is None
    assert len(res.trace) == 3 and not any(s.feasible for s in res.trace)


def test_ties_break_to_smaller_n(monkeypatch, params, constraints, quad):
    import covert_spc.optimizer as mod

    monkeypatch.setattr(mod, "solve_inner", lambda p, n, c, q, m: InnerSolution(n, 1.0, 1.0, 5.0, True))
    res = mod.optimize(params, constraints.replace(n_min=80, n_max=90), quad)
    assert res.best.n == 80


def test_throughput_optimal_rate_is_interior(params):
    R = throughput_optimal_rate(params, 2.5, 100)
    assert R_MIN < R < rate_upper_bound(params, 2.5)
