"""Monte Carlo simulation of multiuser diversity in spectrum-sharing networks.

The package models three spectrum-sharing network topologies (uplink C-MAC,
downlink C-BC, ad-hoc C-PAC) plus an interference-free Reference baseline
under unit-power Rayleigh block fading, schedules the strongest user per
block, and estimates throughput and multiuser diversity gain together with
the analytic constants that sandwich the gain.
"""

from .analysis import (
    BoundConstants,
    bound_constants,
    expected_capped_power,
    expected_interference_attenuation,
    exponential_integral_e1,
    reference_mdg_exact,
    scaling_function,
)
from .errors import ConfigurationError, StructureError, UnsupportedConfigurationError
from .metrics import (
    CurvePoint,
    Estimate,
    Quantity,
    asymptotic_ratio,
    estimate_ergodic_throughput,
    estimate_mdg_kappa,
    estimate_mdg_ratio,
    normalized_throughput_curve,
)
from .model import (
    ChannelRole,
    FadingDistribution,
    FadingState,
    NetworkConfig,
    NetworkKind,
    NetworkVariant,
    RngSpec,
    sample_state,
)
from .scheduler import (
    ScheduleDecision,
    max_transmit_power,
    per_user_snr,
    realized_snr,
    select_user,
)

__version__ = "1.0.0"

__all__ = [
    "BoundConstants",
    "ChannelRole",
    "ConfigurationError",
    "CurvePoint",
    "Estimate",
    "FadingDistribution",
    "FadingState",
    "NetworkConfig",
    "NetworkKind",
    "NetworkVariant",
    "Quantity",
    "RngSpec",
    "ScheduleDecision",
    "StructureError",
    "UnsupportedConfigurationError",
    "asymptotic_ratio",
    "bound_constants",
    "estimate_ergodic_throughput",
    "estimate_mdg_kappa",
    "estimate_mdg_ratio",
    "expected_capped_power",
    "expected_interference_attenuation",
    "exponential_integral_e1",
    "max_transmit_power",
    "normalized_throughput_curve",
    "per_user_snr",
    "realized_snr",
    "reference_mdg_exact",
    "sample_state",
    "scaling_function",
    "select_user",
    "__version__",
]
