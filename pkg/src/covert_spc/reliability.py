"""Bob's decoding performance under Willie's jamming.

Per-round finite-blocklength error (normal approximation), the SINR density,
and its average using the three-piece linearization of the Q-function: error
1 below ``alpha - 1/(2 beta)``, 0 above ``alpha + 1/(2 beta)``, linear between.
"""

from __future__ import annotations

import math

import numpy as np

from .model import SystemParams
from .specfun import exp_integral_e1_scaled, q_function

R_MIN = 1e-3
LN2 = math.log(2.0)


def sinr(params: SystemParams, P_a: float, g_ab, g_wb):
    """Received SINR at Bob for given squared channel gains."""
    return P_a * np.asarray(g_ab) / (params.P_w * np.asarray(g_wb) + params.sigma_b2)


def decoding_error_prob(gamma_b, R: float, n: int):
    """Normal-approximation block error probability at SINR ``gamma_b``.

    Zero SINR is certain error (the dispersion term is 0/0 there).
    """
    g = np.asarray(gamma_b, dtype=float)
    if (g < 0).any():
        raise ValueError("gamma_b must be nonnegative")
    if not R > 0 or n < 1:
        raise ValueError("need R > 0 and n >= 1")
    out = np.ones_like(g)
    pos = g > 0
    gp = g[pos]
    # 1 - (1+g)^-2 written to keep precision for tiny g
    dispersion = np.sqrt(-np.expm1(-2.0 * np.log1p(gp)))
    arg = LN2 * math.sqrt(n) * (np.log2(1.0 + gp) - R) / dispersion
    out[pos] = q_function(arg)
    return float(out) if out.ndim == 0 else out


def snr_pdf(params: SystemParams, P_a: float, t):
    """Density of Bob's SINR with exponential gains on both links."""
    if not P_a > 0:
        raise ValueError("P_a must be positive")
    t = np.asarray(t, dtype=float)
    a = P_a * params.lambda_ab
    w = params.P_w * params.lambda_wb
    s = params.sigma_b2
    denom = a + w * t
    out = (s * denom + a * w) / denom**2 * np.exp(-s * t / a)
    return float(out) if out.ndim == 0 else out


def linearization(R: float, n: int) -> tuple[float, float]:
    """``(alpha, beta)``: SINR threshold ``2^R - 1`` and slope of the linearized Q."""
    if R < R_MIN:
        raise ValueError(f"R must be >= {R_MIN}")
    alpha = math.expm1(R * LN2)
    beta = math.sqrt(n / (2.0 * math.pi * math.expm1(2.0 * R * LN2)))
    return alpha, beta


def _g(x: float, params: SystemParams, P_a: float, alpha: float, beta: float) -> float:
    # antiderivative helper of the linear piece; exp(b) E1(kx + b) is folded
    # into the scaled E1 so that small P_w does not overflow
    a = P_a * params.lambda_ab
    w = params.P_w * params.lambda_wb
    k = params.sigma_b2 / a
    b = params.sigma_b2 / w
    lin = a * (2.0 * beta * (x - alpha) - 1.0) / (2.0 * (a + w * x))
    return math.exp(-k * x) * (lin + beta * a / w * exp_integral_e1_scaled(k * x + b))


def _check(P_a: float, n: int):
    if not P_a > 0:
        raise ValueError("P_a must be positive")
    if n < 2:
        raise ValueError("n must be >= 2")


def avg_decoding_error(params: SystemParams, P_a: float, R: float, n: int) -> float:
    """Fading-averaged decoding error under jamming, closed form.

    When the linear piece starts below zero SINR, only its ``t >= 0`` part is
    integrated (the SINR has no mass below 0).
    """
    _check(P_a, n)
    if params.P_w == 0:
        return avg_decoding_error_passive(params, P_a, R, n)
    alpha, beta = linearization(R, n)
    lo = alpha - 1.0 / (2.0 * beta)
    hi = alpha + 1.0 / (2.0 * beta)
    if lo < 0:
        return _clamp(_truncated(params, P_a, beta, hi))
    a = P_a * params.lambda_ab
    w = params.P_w * params.lambda_wb
    k = params.sigma_b2 / a
    cdf_lo = 1.0 - a * math.exp(-k * lo) / (a + w * lo)
    value = cdf_lo + _g(hi, params, P_a, alpha, beta) - _g(lo, params, P_a, alpha, beta)
    return _clamp(value)


def avg_decoding_error_passive(params: SystemParams, P_a: float, R: float, n: int) -> float:
    """Fading-averaged decoding error without jamming (P_w treated as 0)."""
    _check(P_a, n)
    alpha, beta = linearization(R, n)
    lo = alpha - 1.0 / (2.0 * beta)
    if lo < 0:
        return _clamp(_truncated(params.replace(P_w=0.0), P_a, beta, alpha + 1.0 / (2.0 * beta)))
    a = P_a * params.lambda_ab
    k = params.sigma_b2 / a
    half = k / (2.0 * beta)
    # exp(-k alpha) (exp(half) - exp(-half)), kept as a difference of decays
    spread = math.exp(-k * alpha + half) - math.exp(-k * alpha - half)
    return _clamp(1.0 - a * beta / params.sigma_b2 * spread)


def _truncated(params: SystemParams, P_a: float, beta: float, hi: float) -> float:
    # beta * int_0^hi CDF(t) dt = beta * hi - beta * int_0^hi survival(t) dt
    a = P_a * params.lambda_ab
    k = params.sigma_b2 / a
    if params.P_w == 0:
        surv = -math.expm1(-k * hi) / k
    else:
        w = params.P_w * params.lambda_wb
        b = params.sigma_b2 / w
        surv = a / w * (exp_integral_e1_scaled(b) - math.exp(-k * hi) * exp_integral_e1_scaled(k * hi + b))
    return beta * hi - beta * surv


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, float(p)))
