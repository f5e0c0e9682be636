"""Power policy, per-user SNR models, and opportunistic user selection.

For one block-fading state the scheduler grants the channel to the single
user with the largest achievable receiver SNR (deterministic TDMA).  Every
secondary transmitter sends at the largest power allowed by both its peak
budget and the peak received-interference limit at the primary receiver,
which makes the per-user SNR below the *maximum achievable* one:

    uplink  (C-MAC):  h_k * min(P_k, Gamma/g_k) / (1 + Q*e)
    downlink (C-BC):  h_k * min(J,   Gamma/g)   / (1 + Q*e_k)
    ad hoc  (C-PAC):  h_k * min(P_k, Gamma/g_k) / (1 + Q*e_k)
    Reference:        h_k * P_k   (or h_k * J for the downlink mirror)

Noise power is normalized to 1, so all quantities are linear SNRs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .model import FadingState, NetworkConfig, NetworkVariant

__all__ = [
    "ScheduleDecision",
    "max_transmit_power",
    "per_user_snr",
    "realized_snr",
    "select_user",
]


@dataclass(frozen=True, eq=False)
class ScheduleDecision:
    """Outcome of scheduling one fading block.

    ``selected_user`` is the lowest index attaining the maximum of
    ``per_user_snr``; ``realized_snr`` is that maximum.
    """

    selected_user: int
    realized_snr: float
    per_user_snr: np.ndarray


def max_transmit_power(cap: float, gamma_limit: float, g: float) -> float:
    """Largest transmit power satisfying both peak constraints.

    Args:
        cap: peak transmit power budget (P_k or J), > 0.
        gamma_limit: peak received-interference limit Gamma, > 0.
        g: power gain of the interference channel toward the primary
            receiver, >= 0.  A zero gain makes the interference constraint
            vacuous, so the budget alone applies.

    Returns:
        min(cap, gamma_limit / g), with the convention above at g = 0.
    """
    if g == 0.0:
        return cap
    return min(cap, gamma_limit / g)


def per_user_snr(state: FadingState, config: NetworkConfig) -> np.ndarray:
    """Maximum achievable receiver SNR of every user for one fading state.

    Args:
        state: block-fading realization with shapes matching ``config.kind``.
        config: network description.

    Returns:
        Length-K array of linear SNRs.

    Raises:
        StructureError: if the state's shapes do not match the network kind.
    """
    state.check_shape(config)
    variant = config.kind.variant
    h = state.h
    q = config.pr_power
    gamma = config.interference_limit

    if variant is NetworkVariant.REFERENCE:
        budget = config.data_power_budget()
        cap = np.asarray(budget) if isinstance(budget, tuple) else budget
        return h * cap

    if variant is NetworkVariant.CBC:
        p = max_transmit_power(config.bs_power, gamma, state.g)
        return h * p / (1.0 + q * state.e)

    cap = (
        np.asarray(config.per_user_power)
        if isinstance(config.per_user_power, tuple)
        else config.per_user_power
    )
    with np.errstate(divide="ignore"):
        p = np.minimum(cap, gamma / state.g)
    return h * p / (1.0 + q * state.e)


def select_user(snrs: np.ndarray) -> ScheduleDecision:
    """Pick the user with the largest SNR (lowest index wins exact ties).

    Args:
        snrs: nonempty sequence of finite, nonnegative linear SNRs.

    Returns:
        ScheduleDecision with the argmax index and the attained maximum.

    Raises:
        StructureError: if the sequence is empty or contains non-finite or
            negative entries.
    """
    snrs = np.asarray(snrs, dtype=float)
    if snrs.ndim != 1 or snrs.size == 0:
        raise StructureError("snrs must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(snrs)) or np.any(snrs < 0.0):
        raise StructureError("snrs must be finite and >= 0")
    k_star = int(np.argmax(snrs))
    return ScheduleDecision(
        selected_user=k_star,
        realized_snr=float(snrs[k_star]),
        per_user_snr=snrs,
    )


def realized_snr(state: FadingState, config: NetworkConfig) -> float:
    """SNR attained by the scheduled user: max over ``per_user_snr``."""
    return select_user(per_user_snr(state, config)).realized_snr
