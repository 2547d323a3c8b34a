"""Effective-throughput maximization under covertness, reliability, power and
blocklength constraints.

Two layers: for each blocklength the covertness constraint fixes the power
(the detection error falls with power while throughput rises), then the rate
is the throughput-maximizing rate capped by the reliability constraint. The
outer layer scans every blocklength in the window.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .covertness import (
    QuadratureConfig,
    avg_detection_error_approx,
    avg_detection_error_quadrature,
)
from .model import Constraints, SystemParams
from .reliability import R_MIN, avg_decoding_error

POWER_TOL = 1e-9
RATE_TOL = 1e-6
MAX_ITER = 200
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalFault(RuntimeError):
    """A bracketing assumption (monotonicity) was violated."""


@dataclass(frozen=True)
class InnerSolution:
    n: int
    P_a_star: float
    R_star: float
    eta: float
    feasible: bool
    binding: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class OptimizationResult:
    best: InnerSolution | None
    trace: tuple[InnerSolution, ...]

    @property
    def feasible(self) -> bool:
        return self.best is not None


def effective_throughput(n: int, R: float, delta_bar: float) -> float:
    """Expected number of correctly delivered bits per packet."""
    return n * R * (1.0 - delta_bar)


def covert_metric(method: str):
    if method == "exact":
        return lambda params, P_a, n, quad: avg_detection_error_quadrature(params, P_a, n, quad)
    if method == "approx":
        return lambda params, P_a, n, quad: avg_detection_error_approx(params, P_a, n)
    raise ValueError(f"unknown covertness method '{method}'")


def solve_covert_power(
    params: SystemParams,
    n: int,
    constraints: Constraints,
    quad: QuadratureConfig = QuadratureConfig(),
    method: str = "exact",
) -> float:
    """Largest power meeting the covertness constraint, capped at ``P_a_max``."""
    xi = covert_metric(method)
    target = 1.0 - constraints.epsilon
    p_max = constraints.P_a_max

    def slack(P):
        return xi(params, P, n, quad) - target

    if slack(p_max) >= 0:
        return p_max
    lo, hi = 0.0, p_max
    # slack(0) = epsilon > 0, slack(p_max) < 0
    it = 0
    while hi - lo > POWER_TOL and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if slack(mid) >= 0:
            lo = mid
        else:
            hi = mid
        it += 1
    if slack(lo) < 0:
        raise NumericalFault("covertness slack not monotone in power")
    return lo


def rate_upper_bound(params: SystemParams, P_a: float) -> float:
    return math.log2(1.0 + P_a * params.lambda_ab * 50.0 / params.sigma_b2)


def golden_section_max(f, lo: float, hi: float, tol: float = RATE_TOL, max_iter: int = MAX_ITER):
    """Maximizer of a unimodal ``f`` on ``[lo, hi]``."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    best = max(((lo, f(lo)), (c, fc), (d, fd), (hi, f(hi))), key=lambda p: p[1])
    return best[0]


def max_reliable_rate(params: SystemParams, P_a: float, n: int, kappa: float, r_hi: float) -> float:
    """Largest rate on ``[R_MIN, r_hi]`` whose average decoding error is within ``kappa``."""
    if avg_decoding_error(params, P_a, r_hi, n) <= kappa:
        return r_hi
    lo, hi = R_MIN, r_hi
    it = 0
    while hi - lo > 1e-12 * max(1.0, hi) and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if avg_decoding_error(params, P_a, mid, n) <= kappa:
            lo = mid
        else:
            hi = mid
        it += 1
    return lo


def throughput_optimal_rate(params: SystemParams, P_a: float, n: int) -> float:
    """Rate maximizing ``n R (1 - avg error)`` with no reliability cap."""

    def eta(R):
        return effective_throughput(n, R, avg_decoding_error(params, P_a, R, n))

    return golden_section_max(eta, R_MIN, rate_upper_bound(params, P_a))


def solve_rate(
    params: SystemParams, P_a: float, n: int, constraints: Constraints
) -> tuple[float, float, tuple[str, ...]] | None:
    """``(R*, eta(R*), binding)`` or ``None`` when even ``R_MIN`` is unreliable."""
    if not P_a > 0:
        return None
    if avg_decoding_error(params, P_a, R_MIN, n) > constraints.kappa:
        return None
    r_opt = throughput_optimal_rate(params, P_a, n)
    r_rel = max_reliable_rate(params, P_a, n, constraints.kappa, rate_upper_bound(params, P_a))
    if r_rel < r_opt:
        rate, binding = r_rel, ("reliability",)
    else:
        rate, binding = r_opt, ("rate-opt",)
    eta = effective_throughput(n, rate, avg_decoding_error(params, P_a, rate, n))
    return rate, eta, binding


def solve_inner(
    params: SystemParams,
    n: int,
    constraints: Constraints,
    quad: QuadratureConfig = QuadratureConfig(),
    method: str = "exact",
) -> InnerSolution:
    P_a = solve_covert_power(params, n, constraints, quad, method)
    power_binding = "power" if P_a >= constraints.P_a_max else "covertness"
    solved = solve_rate(params, P_a, n, constraints)
    if solved is None:
        return InnerSolution(n, P_a, float("nan"), 0.0, False, (power_binding,))
    rate, eta, binding = solved
    return InnerSolution(n, P_a, rate, eta, True, (power_binding,) + binding)


def optimize(
    params: SystemParams,
    constraints: Constraints,
    quad: QuadratureConfig = QuadratureConfig(),
    method: str = "exact",
    workers: int = 1,
) -> OptimizationResult:
    """Exhaustive search over the blocklength window; ties go to the smaller n."""
    ns = range(constraints.n_min, constraints.n_max + 1)

    def inner(n):
        return solve_inner(params, n, constraints, quad, method)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            trace = tuple(pool.map(inner, ns))
    else:
        trace = tuple(inner(n) for n in ns)
    best = None
    for sol in trace:
        if sol.feasible and (best is None or sol.eta > best.eta):
            best = sol
    return OptimizationResult(best, trace)


def fixed_rate_throughput(
    params: SystemParams,
    n: int,
    constraints: Constraints,
    R: float = 1.0,
    quad: QuadratureConfig = QuadratureConfig(),
    method: str = "exact",
) -> float:
    """Throughput at a fixed rate, power set by the covertness constraint alone."""
    P_a = solve_covert_power(params, n, constraints, quad, method)
    return effective_throughput(n, R, avg_decoding_error(params, P_a, R, n))


def reliability_frontier(
    params: SystemParams,
    epsilon: float,
    n: int = 100,
    P_a_max: float = 5.0,
    quad: QuadratureConfig = QuadratureConfig(),
) -> float:
    """Average decoding error reached at the covert power and throughput-optimal rate.

    This is the smallest reliability cap kappa under which the throughput-optimal
    operating point for covertness slack ``epsilon`` stays feasible.
    """
    cons = Constraints(epsilon=epsilon, kappa=0.5, P_a_max=P_a_max, n_min=n, n_max=n)
    P_a = solve_covert_power(params, n, cons, quad)
    R = throughput_optimal_rate(params, P_a, n)
    return avg_decoding_error(params, P_a, R, n)
