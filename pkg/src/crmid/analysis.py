"""Closed-form analytic quantities backing the Monte Carlo estimators.

Everything here is deterministic numerics: the exponential integral E1, the
two Rayleigh-fading expectations that appear in the diversity-gain constants,
harmonic numbers (the exact reference-network diversity gain), the asymptotic
scaling denominator, and the sandwich-bound constants.

With g, e unit-mean exponential the two expectations have closed forms

    E[min(P, Gamma/g)]  =  P*(1 - exp(-Gamma/P)) + Gamma*E1(Gamma/P)
    E[1/(1 + Q*e)]      =  exp(1/Q)*E1(1/Q) / Q

and the bound constants follow as alpha_mac = P / E[min(P, Gamma/g)],
alpha_bc = 1 / E[1/(1 + Q*e)], alpha_pac = alpha_mac * alpha_bc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnsupportedConfigurationError
from .model import NetworkConfig

__all__ = [
    "BoundConstants",
    "bound_constants",
    "expected_capped_power",
    "expected_interference_attenuation",
    "exponential_integral_e1",
    "reference_mdg_exact",
    "scaling_function",
]

_EULER_GAMMA = 0.57721566490153286
_MAX_ITER = 400


def _e1_series(x: float) -> float:
    """Power series for E1, accurate for 0 < x < 1."""
    total = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for n in range(1, _MAX_ITER):
        term *= -x / n
        contribution = -term / n
        total += contribution
        if abs(contribution) < 1e-16 * abs(total):
            return total
    raise ArithmeticError(f"E1 series failed to converge at x={x}")


def _exp_e1_scaled(x: float) -> float:
    """exp(x) * E1(x) for x >= 1, via the modified Lentz continued fraction.

    Computing the scaled product directly keeps the value representable for
    arbitrarily large x, where E1(x) itself underflows.
    """
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    f = d
    for n in range(1, _MAX_ITER):
        a = -(n * n)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-15:
            return f
    raise ArithmeticError(f"E1 continued fraction failed to converge at x={x}")


def exponential_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = integral_x^inf exp(-t)/t dt.

    Relative accuracy is about 1e-13 over the positive axis: a power series
    below x = 1 and a continued fraction at and above it.

    Args:
        x: strictly positive argument.

    Raises:
        ValueError: if x <= 0.
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise ValueError(f"E1 requires x > 0, got {x!r}")
    if x < 1.0:
        return _e1_series(x)
    return math.exp(-x) * _exp_e1_scaled(x)


def expected_capped_power(P: float, gamma_limit: float) -> float:
    """E[min(P, Gamma/g)] for a unit-mean exponential interference gain g.

    Args:
        P: peak transmit power, > 0.
        gamma_limit: peak interference limit Gamma, > 0.

    Returns:
        P*(1 - exp(-Gamma/P)) + Gamma*E1(Gamma/P).

    Raises:
        ValueError: if either argument is nonpositive.
    """
    P = float(P)
    gamma_limit = float(gamma_limit)
    if P <= 0.0 or gamma_limit <= 0.0:
        raise ValueError("expected_capped_power requires P > 0 and gamma_limit > 0")
    ratio = gamma_limit / P
    tail = math.exp(-ratio) * _exp_e1_scaled(ratio) if ratio >= 1.0 else _e1_series(ratio)
    return P * -math.expm1(-ratio) + gamma_limit * tail


def expected_interference_attenuation(Q: float) -> float:
    """E[1/(1 + Q*e)] for a unit-mean exponential interference gain e.

    Args:
        Q: primary transmit power, > 0.

    Returns:
        exp(1/Q)*E1(1/Q)/Q, evaluated in scaled form so small Q never
        overflows.

    Raises:
        ValueError: if Q <= 0.
    """
    Q = float(Q)
    if Q <= 0.0:
        raise ValueError("expected_interference_attenuation requires Q > 0")
    x = 1.0 / Q
    if x >= 1.0:
        return _exp_e1_scaled(x) / Q
    return math.exp(x) * _e1_series(x) / Q


def reference_mdg_exact(K: int) -> float:
    """Exact multiuser diversity gain of the Reference network.

    For unit-mean exponential data gains, E[max of K] = H_K and E[h] = 1, so
    the gain is the K-th harmonic number.

    Args:
        K: number of users, >= 1.

    Raises:
        ValueError: if K < 1.
    """
    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ValueError(f"reference_mdg_exact requires an integer K >= 1, got {K!r}")
    return math.fsum(1.0 / i for i in range(1, int(K) + 1))


def scaling_function(K: int) -> float:
    """Asymptotic throughput scale log2(ln K).

    Args:
        K: number of users, >= 3 so the value is positive.

    Raises:
        ValueError: if K <= 2.
    """
    if isinstance(K, bool) or int(K) != K or K <= 2:
        raise ValueError(f"scaling_function requires an integer K >= 3, got {K!r}")
    return math.log2(math.log(K))


@dataclass(frozen=True)
class BoundConstants:
    """Sandwich-bound and diversity-gain constants of a symmetric network.

    alpha_pac is exactly alpha_mac * alpha_bc; each alpha is >= 1, and each
    kappa is the reciprocal of the corresponding single-user mean SNR factor.
    """

    alpha_mac: float
    alpha_bc: float
    alpha_pac: float
    kappa_mac: float
    kappa_bc: float
    kappa_pac: float
    kappa_0: float


def bound_constants(config: NetworkConfig) -> BoundConstants:
    """Analytic constants for a symmetric unit-power-Rayleigh configuration.

    Args:
        config: network description; must have equal per-user powers and
            Rayleigh fading on every channel group (the closed forms assume
            unit-mean exponential gains, E[h] = 1).

    Raises:
        UnsupportedConfigurationError: for asymmetric powers or any
            non-Rayleigh channel distribution.
    """
    if not config.symmetric():
        raise UnsupportedConfigurationError("bound constants require a symmetric config")
    if not config.all_rayleigh():
        raise UnsupportedConfigurationError(
            "bound constants are closed forms for unit-power Rayleigh fading only"
        )
    P = config.symmetric_power()
    capped = expected_capped_power(P, config.interference_limit)
    attenuation = expected_interference_attenuation(config.pr_power)
    mean_h = 1.0
    alpha_mac = P / capped
    alpha_bc = 1.0 / attenuation
    return BoundConstants(
        alpha_mac=alpha_mac,
        alpha_bc=alpha_bc,
        alpha_pac=alpha_mac * alpha_bc,
        kappa_mac=1.0 / (mean_h * capped),
        kappa_bc=1.0 / (mean_h * attenuation),
        kappa_pac=1.0 / (mean_h * capped * attenuation),
        kappa_0=1.0 / mean_h,
    )
