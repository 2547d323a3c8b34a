"""Scalar special functions: Gaussian tail, regularized lower incomplete gamma, E1.

Q and the incomplete gamma accept numpy arrays. E1 is scalar; it is evaluated
with a power series below 1 and a Lentz continued fraction above, and has a
scaled companion ``exp(x) * E1(x)`` for arguments where ``E1`` underflows.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

_EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-16
_MAX_ITER = 500


def q_function(x):
    """Standard normal upper tail probability ``Q(x) = P(Z > x)``."""
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise ValueError("q_function: NaN argument")
    out = 0.5 * special.erfc(arr / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def reg_lower_gamma(n, x):
    """Regularized lower incomplete gamma ``gamma(n, x) / Gamma(n)``.

    Stays accurate for large ``n`` (no explicit Gamma(n) is formed).
    """
    n_arr = np.asarray(n, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if (n_arr <= 0).any() or np.isnan(n_arr).any():
        raise ValueError(f"reg_lower_gamma: shape must be positive, got {n}")
    if (x_arr < 0).any() or np.isnan(x_arr).any():
        raise ValueError(f"reg_lower_gamma: argument must be nonnegative, got {x}")
    out = special.gammainc(n_arr, x_arr)
    return float(out) if out.ndim == 0 else out


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    return -_EULER_GAMMA - math.log(x) - total


def _e1_scaled_cf(x: float) -> float:
    # modified Lentz on E1(x) e^x = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x}")


def exp_integral_e1(x: float) -> float:
    """Exponential integral ``E1(x) = int_x^inf exp(-t)/t dt`` for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"exp_integral_e1: argument must be positive, got {x}")
    if math.isinf(x):
        return 0.0
    if x < 1.0:
        return _e1_series(x)
    return math.exp(-x) * _e1_scaled_cf(x)


def exp_integral_e1_scaled(x: float) -> float:
    """``exp(x) * E1(x)``, finite for every positive ``x`` (tends to ``1/x``)."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"exp_integral_e1_scaled: argument must be positive, got {x}")
    if math.isinf(x):
        return 0.0
    if x < 1.0:
        return math.exp(x) * _e1_series(x)
    return _e1_scaled_cf(x)


def log_gamma_ratio(n: float) -> float:
    """``ln(Gamma(n) / (exp(-n) n^n))`` without forming either factor."""
    return math.lgamma(n) + n - n * math.log(n)
