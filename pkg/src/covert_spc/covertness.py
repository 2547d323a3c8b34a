"""Willie's detection performance with a radiometer.

Per-round error probability at any threshold, the per-round optimal threshold,
its fading average (Gauss-Chebyshev quadrature), the closed-form lower
approximation and its fading average, and the Pinsker/KL benchmark bound.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .model import SystemParams, willie_noise_floor
from .specfun import (
    exp_integral_e1_scaled,
    log_gamma_ratio,
    reg_lower_gamma,
)


@dataclass(frozen=True)
class QuadratureConfig:
    B: int = 100

    def __post_init__(self):
        if int(self.B) != self.B or self.B < 10:
            raise ValueError("B must be an integer >= 10")


@dataclass(frozen=True)
class CovertnessReport:
    xi_exact_avg: float
    xi_approx_avg: float
    xi_kl_avg: float
    seconds_exact: float
    seconds_approx: float
    seconds_kl: float


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


def detection_error_prob(params: SystemParams, P_a: float, g_aw: float, n: int, tau: float) -> float:
    """False-alarm plus missed-detection probability at threshold ``tau``.

    Under either hypothesis ``n T / variance`` is Gamma(n, 1) distributed.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if n < 1:
        raise ValueError("n must be >= 1")
    s2 = willie_noise_floor(params)
    if math.isinf(tau):
        return 1.0
    p_h0 = reg_lower_gamma(n, n * tau / s2)
    p_h1 = reg_lower_gamma(n, n * tau / (s2 + P_a * g_aw))
    return _clamp(1.0 - p_h0 + p_h1)


def optimal_threshold(params: SystemParams, P_a: float, g_aw: float) -> float:
    """Threshold minimizing the per-round detection error when Willie knows g_aw."""
    s2 = willie_noise_floor(params)
    u = P_a * g_aw
    if u <= 0:
        return s2
    return s2 * (s2 + u) / u * math.log1p(u / s2)


def _gap_at_optimal(n: int, s2: float, x):
    """``P(n, n tau*/s2) - P(n, n tau*/(s2+x))`` for received powers ``x > 0``."""
    x = np.asarray(x, dtype=float)
    log_term = np.log1p(x / s2)
    upper = n * (s2 + x) / x * log_term
    lower = n * s2 / x * log_term
    return reg_lower_gamma(n, upper) - reg_lower_gamma(n, lower)


def chebyshev_nodes(B: int) -> np.ndarray:
    """Gauss-Chebyshev (first kind) abscissae mapped onto ``(0, pi/2)``."""
    i = np.arange(1, B + 1)
    return np.pi / 4 * (1 + np.cos((2 * i - 1) * np.pi / (2 * B)))


def avg_detection_error_quadrature(
    params: SystemParams, P_a: float, n: int, quad: QuadratureConfig = QuadratureConfig()
) -> float:
    """Fading-averaged minimum detection error, by B-node Gauss-Chebyshev quadrature.

    The received power ``x = P_a |h_aw|^2`` is exponential with mean
    ``m = P_a lambda_aw``; the integral over ``x`` is mapped to ``(0, pi/2)``
    through ``x = m tan(theta)`` so the nodes resolve the density's scale.
    """
    if P_a < 0:
        raise ValueError("P_a must be nonnegative")
    if P_a == 0:
        return 1.0
    s2 = willie_noise_floor(params)
    m = P_a * params.lambda_aw
    theta = chebyshev_nodes(quad.B)
    t = np.tan(theta)
    weight = np.exp(-t) * np.sqrt(theta * (np.pi / 2 - theta)) / np.cos(theta) ** 2
    total = np.pi / quad.B * np.sum(_gap_at_optimal(n, s2, m * t) * weight)
    return _clamp(1.0 - total)


def xi_lower_approx(params: SystemParams, P_a: float, g_aw: float, n: int) -> float:
    """Closed-form lower approximation of the per-round minimum detection error."""
    if n < 2:
        raise ValueError("n must be >= 2")
    x = P_a * g_aw / willie_noise_floor(params)
    log_ratio = log_gamma_ratio(n)  # ln(Gamma(n) / (e^-n n^n))
    # x < exp(ratio) - 1  <=>  log1p(x) < ratio
    if math.log1p(x) >= math.exp(log_ratio):
        return 0.0
    return _clamp(1.0 - math.exp(-log_ratio) * math.log1p(x))


def avg_detection_error_approx(params: SystemParams, P_a: float, n: int) -> float:
    """Fading average of :func:`xi_lower_approx`, in closed form via E1."""
    if P_a < 0:
        raise ValueError("P_a must be nonnegative")
    if n < 2:
        raise ValueError("n must be >= 2")
    if P_a == 0:
        return 1.0
    a = willie_noise_floor(params) / (P_a * params.lambda_aw)
    log_ratio = log_gamma_ratio(n)
    ratio = math.exp(log_ratio)
    # e^a [E1(a) - E1(a e^r)] = E1s(a) - exp(a - a e^r) E1s(a e^r)
    far = a * math.exp(ratio)
    bracket = exp_integral_e1_scaled(a) - math.exp(a - far) * exp_integral_e1_scaled(far)
    return _clamp(1.0 - math.exp(-log_ratio) * bracket)


def kl_divergence(params: SystemParams, P_a: float, g_aw: float, n: int) -> float:
    """KL divergence between Willie's n-sample observations under H0 and H1."""
    x = P_a * g_aw / willie_noise_floor(params)
    return max(0.0, n * (math.log1p(x) - x / (1.0 + x)))


def kl_lower_bound(params: SystemParams, P_a: float, g_aw: float, n: int) -> float:
    """Pinsker lower bound ``1 - sqrt(D / 2)`` on the minimum detection error."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(0.0, 1.0 - math.sqrt(kl_divergence(params, P_a, g_aw, n) / 2.0))


def avg_kl_divergence(params: SystemParams, P_a: float, n: int) -> float:
    """Fading-averaged KL divergence; ``E[ln(1+cU)] = e^a E1(a)`` with ``a = 1/c``."""
    if P_a <= 0:
        return 0.0
    a = willie_noise_floor(params) / (P_a * params.lambda_aw)
    e1s = exp_integral_e1_scaled(a)
    return max(0.0, n * ((1.0 + a) * e1s - 1.0))


def avg_kl_lower_bound(params: SystemParams, P_a: float, n: int) -> float:
    """Pinsker bound applied to the fading-averaged KL divergence."""
    return max(0.0, 1.0 - math.sqrt(avg_kl_divergence(params, P_a, n) / 2.0))


def covertness_report(
    params: SystemParams, P_a: float, n: int, quad: QuadratureConfig = QuadratureConfig()
) -> CovertnessReport:
    t0 = time.perf_counter()
    exact = avg_detection_error_quadrature(params, P_a, n, quad)
    t1 = time.perf_counter()
    approx = avg_detection_error_approx(params, P_a, n)
    t2 = time.perf_counter()
    kl = avg_kl_lower_bound(params, P_a, n)
    t3 = time.perf_counter()
    return CovertnessReport(exact, approx, kl, t1 - t0, t2 - t1, t3 - t2)
