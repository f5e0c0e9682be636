"""Monte Carlo estimators for throughput, diversity gain, and scaling ratios.

All estimators consume per-sample scalars produced by a single streaming
evaluator.  For each fading block the evaluator returns three numbers:

* the realized SNR of the scheduled (best) user,
* the SNR of user index 0 — the common-random-numbers single-user baseline
  shared by every ratio estimator, which makes K = 1 ratios exactly 1.0,
* the network's diversity max-expression (the scheduled maximum with the
  factors that cancel between numerator and denominator stripped off),
  whose mean times the analytic kappa constant is the diversity gain.

Users are processed in fixed-size chunks so K = 10^6 runs in O(chunk)
memory, and user k's gains are read from the same substream prefix for every
K, giving nested common draws across user counts.  The Reference network
with symmetric powers and Rayleigh fading skips per-user work entirely by
drawing max_k h_k from the order-statistic inverse CDF.

Per-sample values depend only on (config, master seed, sample index), and
reductions always run in sample-index order, so results are bit-identical
for any worker count.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import analysis
from .errors import ConfigurationError, UnsupportedConfigurationError
from .model import (
    ChannelRole,
    FadingDistribution,
    NetworkConfig,
    NetworkKind,
    NetworkVariant,
    RngSpec,
)
from .scheduler import max_transmit_power

__all__ = [
    "CurvePoint",
    "Estimate",
    "Quantity",
    "asymptotic_ratio",
    "estimate_ergodic_throughput",
    "estimate_mdg_kappa",
    "estimate_mdg_ratio",
    "normalized_throughput_curve",
]

# Users processed per RNG draw while streaming one sample.
CHUNK = 1 << 17
# Sample indices dispatched to a worker at a time.
_BATCH = 4096


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its standard error and sample count."""

    mean: float
    std_error: float
    n_samples: int


class Quantity(enum.Enum):
    """What a curve point measures."""

    THROUGHPUT = "throughput"
    NORMALIZED_THROUGHPUT = "normalized_throughput"
    MDG_RATIO = "mdg_ratio"
    MDG_KAPPA = "mdg_kappa"
    ASYMPTOTIC_RATIO = "asymptotic_ratio"


@dataclass(frozen=True)
class CurvePoint:
    """One (network, K) point of an estimated curve."""

    K: int
    value: Estimate
    quantity: Quantity
    network: NetworkKind


# ---------------------------------------------------------------------------
# Per-sample evaluation
# ---------------------------------------------------------------------------


def _power_chunk(cap: float | tuple[float, ...], start: int, stop: int):
    """Per-user power budget for users [start, stop): scalar or array slice."""
    if isinstance(cap, tuple):
        return np.asarray(cap[start:stop])
    return cap


def _evaluate_reference(config: NetworkConfig, rng: RngSpec, index: int):
    """(realized, user0, max-expression) for one Reference-network sample."""
    budget = config.data_power_budget()
    if config.dist_h is FadingDistribution.RAYLEIGH_UNIT_POWER and not isinstance(budget, tuple):
        # Order-statistic fast path: one uniform gives both max_k h_k (inverse
        # CDF of the K-user maximum) and the comonotone user-0 baseline.
        u = float(rng.stream(index, ChannelRole.H).random())
        h0 = -math.log1p(-u)
        if config.users == 1:
            max_h = h0
        else:
            max_h = -math.log(-math.expm1(math.log(u) / config.users)) if u > 0.0 else 0.0
        return budget * max_h, budget * h0, max_h

    gen_h = rng.stream(index, ChannelRole.H)
    K = config.users
    realized = -math.inf
    max_h = -math.inf
    user0 = 0.0
    done = 0
    while done < K:
        m = min(CHUNK, K - done)
        h = config.dist_h.sample(gen_h, m)
        weighted = h * _power_chunk(budget, done, done + m)
        if done == 0:
            user0 = float(weighted[0])
        realized = max(realized, float(weighted.max()))
        max_h = max(max_h, float(h.max()))
        done += m
    return realized, user0, max_h


def _evaluate_sample(config: NetworkConfig, rng: RngSpec, index: int):
    """(realized, user0, max-expression) for one fading block.

    The arithmetic mirrors ``scheduler.per_user_snr`` operation for
    operation, so composing the public scheduler on ``sample_state`` output
    reproduces these values bit for bit (verified in tests).
    """
    variant = config.kind.variant
    if variant is NetworkVariant.REFERENCE:
        return _evaluate_reference(config, rng, index)

    K = config.users
    q = config.pr_power
    gamma = config.interference_limit
    cap = config.per_user_power
    gen_h = rng.stream(index, ChannelRole.H)
    gen_g = rng.stream(index, ChannelRole.G)
    gen_e = rng.stream(index, ChannelRole.E)

    # Scalar channel groups come from the first draw of their stream so the
    # per-user prefixes stay aligned across different K.
    if variant is NetworkVariant.CMAC:
        denom_common = 1.0 + q * config.dist_e.sample(gen_e)
    elif variant is NetworkVariant.CBC:
        p_common = max_transmit_power(config.bs_power, gamma, config.dist_g.sample(gen_g))

    realized = -math.inf
    dv_max = -math.inf
    user0 = 0.0
    done = 0
    while done < K:
        m = min(CHUNK, K - done)
        h = config.dist_h.sample(gen_h, m)
        if variant is NetworkVariant.CMAC:
            g = config.dist_g.sample(gen_g, m)
            with np.errstate(divide="ignore"):
                p = np.minimum(_power_chunk(cap, done, done + m), gamma / g)
            weighted = h * p
            snr = weighted / denom_common
            dv_max = max(dv_max, float(weighted.max()))
        elif variant is NetworkVariant.CBC:
            e = config.dist_e.sample(gen_e, m)
            denom = 1.0 + q * e
            snr = h * p_common / denom
            dv_max = max(dv_max, float((h / denom).max()))
        else:  # C-PAC
            g = config.dist_g.sample(gen_g, m)
            e = config.dist_e.sample(gen_e, m)
            with np.errstate(divide="ignore"):
                p = np.minimum(_power_chunk(cap, done, done + m), gamma / g)
            snr = h * p / (1.0 + q * e)
        if done == 0:
            user0 = float(snr[0])
        realized = max(realized, float(snr.max()))
        done += m

    if variant is NetworkVariant.CPAC:
        dv_max = realized
    return realized, user0, dv_max


def _collect_range(config: NetworkConfig, rng: RngSpec, start: int, stop: int) -> np.ndarray:
    """Evaluate samples [start, stop); rows are (realized, user0, dv_max)."""
    out = np.empty((3, stop - start))
    for i in range(start, stop):
        out[:, i - start] = _evaluate_sample(config, rng, i)
    return out


def _collect(config: NetworkConfig, n: int, rng: RngSpec, workers: int = 1):
    """Per-sample arrays (realized, user0, dv_max) for indices 0..n-1.

    Values are a pure function of (config, rng, index) and are concatenated
    in index order, so any worker count yields identical arrays.
    """
    if workers <= 1:
        data = _collect_range(config, rng, 0, n)
    else:
        spans = [(s, min(s + _BATCH, n)) for s in range(0, n, _BATCH)]
        parts: list[np.ndarray | None] = [None] * len(spans)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_collect_range, config, rng, a, b): j
                for j, (a, b) in enumerate(spans)
            }
            for future in as_completed(futures):
                parts[futures[future]] = future.result()
        data = np.concatenate(parts, axis=1)
    return data[0], data[1], data[2]


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def _mean_se(x: np.ndarray) -> Estimate:
    n = x.size
    se = math.sqrt(float(x.var(ddof=1)) / n) if n > 1 else 0.0
    return Estimate(mean=float(x.mean()), std_error=se, n_samples=n)


def _ratio_estimate(x: np.ndarray, y: np.ndarray) -> Estimate:
    """First-order (delta method) estimate of mean(x)/mean(y) on paired samples."""
    n = x.size
    mean_x = float(x.mean())
    mean_y = float(y.mean())
    ratio = mean_x / mean_y
    dx = x - mean_x
    dy = y - mean_y
    var_x = float(dx @ dx) / (n - 1)
    var_y = float(dy @ dy) / (n - 1)
    cov = float(dx @ dy) / (n - 1)
    var_ratio = (var_x - 2.0 * ratio * cov + ratio * ratio * var_y) / (n * mean_y * mean_y)
    return Estimate(mean=ratio, std_error=math.sqrt(max(var_ratio, 0.0)), n_samples=n)


def _require_samples(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ConfigurationError(f"n must be an integer >= 2, got {n!r}")


def _require_symmetric(config: NetworkConfig) -> None:
    if not config.symmetric():
        raise UnsupportedConfigurationError(
            "diversity-gain estimators require equal per-user powers"
        )


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def estimate_ergodic_throughput(
    config: NetworkConfig, n: int, rng: RngSpec, workers: int = 1
) -> Estimate:
    """Mean of log2(1 + realized SNR) over n fading blocks, in bits/use."""
    _require_samples(n)
    realized, _, _ = _collect(config, n, rng, workers)
    return _mean_se(np.log2(1.0 + realized))


def estimate_mdg_ratio(
    config: NetworkConfig, n: int, rng: RngSpec, workers: int = 1
) -> Estimate:
    """Multiuser diversity gain E[gamma(K)] / E[gamma(1)] on common draws.

    The denominator reuses user 0's SNR from the same fading blocks, so at
    K = 1 the ratio is exactly 1.0 with zero standard error.
    """
    _require_samples(n)
    _require_symmetric(config)
    realized, user0, _ = _collect(config, n, rng, workers)
    return _ratio_estimate(realized, user0)


def estimate_mdg_kappa(
    config: NetworkConfig, n: int, rng: RngSpec, workers: int = 1
) -> Estimate:
    """Diversity gain via the kappa form: analytic constant times the Monte
    Carlo mean of the network's max-expression."""
    _require_samples(n)
    _require_symmetric(config)
    constants = analysis.bound_constants(config)
    kappa = {
        NetworkVariant.CMAC: constants.kappa_mac,
        NetworkVariant.CBC: constants.kappa_bc,
        NetworkVariant.CPAC: constants.kappa_pac,
        NetworkVariant.REFERENCE: constants.kappa_0,
    }[config.kind.variant]
    _, _, dv_max = _collect(config, n, rng, workers)
    inner = _mean_se(dv_max)
    return Estimate(
        mean=kappa * inner.mean, std_error=kappa * inner.std_error, n_samples=inner.n_samples
    )


def asymptotic_ratio(
    config: NetworkConfig, n: int, rng: RngSpec, workers: int = 1
) -> Estimate:
    """Ergodic throughput divided by its asymptotic scale log2(ln K)."""
    if config.dist_h is not FadingDistribution.RAYLEIGH_UNIT_POWER:
        raise UnsupportedConfigurationError(
            "the log2(ln K) scale applies to Rayleigh data channels only"
        )
    scale = analysis.scaling_function(config.users)
    inner = estimate_ergodic_throughput(config, n, rng, workers)
    return Estimate(
        mean=inner.mean / scale, std_error=inner.std_error / scale, n_samples=inner.n_samples
    )


_VARIANT_ORDER = {
    NetworkVariant.CMAC: 0,
    NetworkVariant.CBC: 1,
    NetworkVariant.CPAC: 2,
    NetworkVariant.REFERENCE: 3,
}


def canonical_network_order(networks: Iterable[NetworkKind]) -> list[NetworkKind]:
    """Deduplicate and order networks as C-MAC, C-BC, C-PAC, Reference."""
    unique = list(dict.fromkeys(networks))
    return sorted(unique, key=lambda kind: _VARIANT_ORDER[kind.variant])


def normalized_throughput_curve(
    networks: Iterable[NetworkKind],
    K_list: Sequence[int],
    n: int,
    rng: RngSpec,
    workers: int = 1,
    per_user_power: float | tuple[float, ...] = 1.0,
    bs_power: float = 1.0,
    pr_power: float = 1.0,
    interference_limit: float = 1.0,
) -> list[CurvePoint]:
    """C(K)/C(1) per network over a sweep of user counts.

    Common random numbers act twice: within a (network, K) point the C(1)
    baseline is user 0 of the same fading blocks, and across K the per-user
    substream prefixes are shared, so curves rise smoothly and K = 1 points
    equal exactly 1.0.

    Args:
        networks: which networks to sweep (deduplicated, canonical order).
        K_list: strictly ascending user counts, nonempty.
        n: samples per point.
        rng: substream spec shared by every point.
        workers: parallel worker processes per point.
        per_user_power / bs_power / pr_power / interference_limit: shared
            power parameters for every generated config.

    Returns:
        CurvePoints ordered by (network, K).
    """
    _require_samples(n)
    K_list = list(K_list)
    if not K_list:
        raise ConfigurationError("K_list must be nonempty")
    if any(b <= a for a, b in zip(K_list, K_list[1:])):
        raise ConfigurationError("K_list must be strictly ascending")
    points: list[CurvePoint] = []
    for kind in canonical_network_order(networks):
        for K in K_list:
            config = NetworkConfig(
                kind=kind,
                users=K,
                per_user_power=per_user_power,
                bs_power=bs_power,
                pr_power=pr_power,
                interference_limit=interference_limit,
            )
            realized, user0, _ = _collect(config, n, rng, workers)
            value = _ratio_estimate(np.log2(1.0 + realized), np.log2(1.0 + user0))
            points.append(
                CurvePoint(K=K, value=value, quantity=Quantity.NORMALIZED_THROUGHPUT, network=kind)
            )
    return points
