"""Network configurations, fading distributions, and reproducible channel sampling.

The simulated system is a spectrum-sharing network in which a group of
secondary (cognitive) users coexists with a licensed primary link under block
fading.  One block-fading realization consists of up to four groups of channel
power gains:

====  =========================================  =========================
name  channel                                    shape
====  =========================================  =========================
h     secondary data channels (user k -> Rx)     length-K sequence
g     secondary Tx -> primary Rx (interference)  length-K or scalar
e     primary Tx -> secondary Rx (interference)  scalar or length-K
f     primary Tx -> primary Rx                   optional scalar, unused
====  =========================================  =========================

Whether ``g``/``e`` are per-user sequences or scalars depends on the network
variant: the uplink (C-MAC) has one shared receiver (scalar ``e``), the
downlink (C-BC) has one shared transmitter (scalar ``g``), and the ad-hoc
parallel-access variant (C-PAC) has per-user links on both sides.  The
Reference variant strips the primary link entirely and keeps only ``h``.

Sampling is counter-based: every (master seed, sample index, channel role)
triple maps to an independent Philox substream, so results never depend on
how sample indices are partitioned across workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, StructureError

__all__ = [
    "ChannelRole",
    "FadingDistribution",
    "FadingState",
    "NetworkConfig",
    "NetworkKind",
    "NetworkVariant",
    "RngSpec",
    "sample_state",
]

_UINT64_BOUND = 1 << 64


class FadingDistribution(enum.Enum):
    """Marginal law of a channel power gain (amplitude squared).

    RAYLEIGH_UNIT_POWER is the production distribution: Rayleigh amplitude
    fading with unit average power, i.e. the power gain is exponential with
    mean 1.  DEGENERATE_ZERO forces every gain to 0 and exists only to make
    edge cases (zero SNR everywhere) deterministically testable.
    """

    RAYLEIGH_UNIT_POWER = "rayleigh_unit_power"
    DEGENERATE_ZERO = "degenerate_zero"

    def sample(self, gen: np.random.Generator, size: int | None = None):
        """Draw power gains from this distribution.

        Args:
            gen: source generator; consumed only by random distributions.
            size: number of gains, or None for a scalar draw.

        Returns:
            float when ``size`` is None, else a float64 array of length ``size``.
        """
        if self is FadingDistribution.RAYLEIGH_UNIT_POWER:
            if size is None:
                return float(gen.standard_exponential())
            return gen.standard_exponential(size)
        if size is None:
            return 0.0
        return np.zeros(size)


class NetworkVariant(enum.Enum):
    """The four simulated network topologies."""

    CMAC = "mac"
    CBC = "bc"
    CPAC = "pac"
    REFERENCE = "ref"


_VARIANT_LABELS = {
    NetworkVariant.CMAC: "C-MAC",
    NetworkVariant.CBC: "C-BC",
    NetworkVariant.CPAC: "C-PAC",
    NetworkVariant.REFERENCE: "Reference",
}


@dataclass(frozen=True)
class NetworkKind:
    """A network variant, plus — for Reference only — which variant it mirrors.

    The Reference network removes the primary link but keeps the power budget
    of the network it is compared against: mirroring C-BC uses the base-station
    budget J, mirroring C-MAC/C-PAC uses the per-user budget P.
    """

    variant: NetworkVariant
    mirror_of: NetworkVariant | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.variant, NetworkVariant):
            raise ConfigurationError(f"variant must be a NetworkVariant, got {self.variant!r}")
        if self.variant is NetworkVariant.REFERENCE:
            if self.mirror_of not in (
                NetworkVariant.CMAC,
                NetworkVariant.CBC,
                NetworkVariant.CPAC,
            ):
                raise ConfigurationError(
                    "Reference networks must set mirror_of to CMAC, CBC, or CPAC; "
                    f"got {self.mirror_of!r}"
                )
        elif self.mirror_of is not None:
            raise ConfigurationError("mirror_of is only meaningful for the Reference variant")

    @classmethod
    def c_mac(cls) -> "NetworkKind":
        return cls(NetworkVariant.CMAC)

    @classmethod
    def c_bc(cls) -> "NetworkKind":
        return cls(NetworkVariant.CBC)

    @classmethod
    def c_pac(cls) -> "NetworkKind":
        return cls(NetworkVariant.CPAC)

    @classmethod
    def reference(cls, mirror_of: NetworkVariant = NetworkVariant.CPAC) -> "NetworkKind":
        return cls(NetworkVariant.REFERENCE, mirror_of)

    @property
    def label(self) -> str:
        """Human-readable series name, also used in CSV output."""
        return _VARIANT_LABELS[self.variant]


def _check_power(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class NetworkConfig:
    """Full static description of one simulated network.

    Args:
        kind: network topology (and mirror tag for Reference).
        users: number of secondary users K (>= 1).
        per_user_power: peak transmit power P_k per user; a scalar means the
            same budget for every user, a length-K sequence sets them
            individually.  Linear scale, normalized to unit noise power.
        bs_power: base-station peak power J (downlink transmitter budget).
        pr_power: primary transmitter power Q as seen by secondary receivers.
        interference_limit: peak received-interference limit at the primary
            receiver (Gamma).
        dist_h / dist_g / dist_e: marginal fading law per channel group.
        include_pr_link: also sample the inert primary-link gain f.
    """

    kind: NetworkKind
    users: int
    per_user_power: float | tuple[float, ...] = 1.0
    bs_power: float = 1.0
    pr_power: float = 1.0
    interference_limit: float = 1.0
    dist_h: FadingDistribution = FadingDistribution.RAYLEIGH_UNIT_POWER
    dist_g: FadingDistribution = FadingDistribution.RAYLEIGH_UNIT_POWER
    dist_e: FadingDistribution = FadingDistribution.RAYLEIGH_UNIT_POWER
    include_pr_link: bool = False
    dist_f: FadingDistribution = FadingDistribution.RAYLEIGH_UNIT_POWER

    def __post_init__(self) -> None:
        if not isinstance(self.kind, NetworkKind):
            raise ConfigurationError(f"kind must be a NetworkKind, got {self.kind!r}")
        if isinstance(self.users, bool) or not isinstance(self.users, (int, np.integer)):
            raise ConfigurationError(f"users must be an integer, got {self.users!r}")
        if self.users < 1:
            raise ConfigurationError(f"users must be >= 1, got {self.users}")
        object.__setattr__(self, "users", int(self.users))

        if np.isscalar(self.per_user_power) and not isinstance(self.per_user_power, (str, bytes)):
            object.__setattr__(
                self, "per_user_power", _check_power("per_user_power", self.per_user_power)
            )
        else:
            powers = tuple(_check_power("per_user_power entry", p) for p in self.per_user_power)
            if len(powers) != self.users:
                raise ConfigurationError(
                    f"per_user_power has {len(powers)} entries for {self.users} users"
                )
            object.__setattr__(self, "per_user_power", powers)

        object.__setattr__(self, "bs_power", _check_power("bs_power", self.bs_power))
        object.__setattr__(self, "pr_power", _check_power("pr_power", self.pr_power))
        object.__setattr__(
            self, "interference_limit", _check_power("interference_limit", self.interference_limit)
        )
        for name in ("dist_h", "dist_g", "dist_e", "dist_f"):
            if not isinstance(getattr(self, name), FadingDistribution):
                raise ConfigurationError(f"{name} must be a FadingDistribution")

    def symmetric(self) -> bool:
        """True iff every user has the same peak transmit power."""
        if isinstance(self.per_user_power, tuple):
            return all(p == self.per_user_power[0] for p in self.per_user_power)
        return True

    def symmetric_power(self) -> float:
        """The common per-user power of a symmetric config."""
        if isinstance(self.per_user_power, tuple):
            if not self.symmetric():
                raise ConfigurationError("config is not symmetric")
            return self.per_user_power[0]
        return self.per_user_power

    def all_rayleigh(self) -> bool:
        """True iff every sampled channel group is unit-power Rayleigh."""
        rayleigh = FadingDistribution.RAYLEIGH_UNIT_POWER
        return self.dist_h is rayleigh and self.dist_g is rayleigh and self.dist_e is rayleigh

    def data_power_budget(self) -> float | tuple[float, ...]:
        """Power budget applied to the data channels h (P_k, or J for the
        downlink and its Reference mirror)."""
        variant = self.kind.variant
        if variant is NetworkVariant.REFERENCE:
            variant = self.kind.mirror_of
        if variant is NetworkVariant.CBC:
            return self.bs_power
        return self.per_user_power


class ChannelRole(enum.IntEnum):
    """Substream tag for each channel group; part of the RNG counter layout."""

    H = 0
    G = 1
    E = 2
    F = 3


@dataclass(frozen=True)
class RngSpec:
    """Deterministic substream derivation from a single master seed.

    Each (sample index, channel role) pair selects an independent Philox
    substream: the index and role occupy the two high words of the 256-bit
    counter, leaving 2^128 draws of in-stream headroom.  Because the mapping
    ignores worker identity, any partition of sample indices across workers
    reproduces the same states, and the first draws of a stream do not depend
    on how many are taken in total (a K-user prefix is shared by all K' >= K).
    """

    master_seed: int

    def __post_init__(self) -> None:
        if isinstance(self.master_seed, bool) or not isinstance(
            self.master_seed, (int, np.integer)
        ):
            raise ConfigurationError(f"master_seed must be an integer, got {self.master_seed!r}")
        if not 0 <= self.master_seed < _UINT64_BOUND:
            raise ConfigurationError("master_seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "master_seed", int(self.master_seed))

    def stream(self, sample_index: int, role: ChannelRole) -> np.random.Generator:
        """Independent generator for one channel group of one sample."""
        if sample_index < 0 or sample_index >= _UINT64_BOUND:
            raise ConfigurationError(f"sample_index out of range: {sample_index!r}")
        bitgen = np.random.Philox(
            counter=[0, 0, int(sample_index), int(role)],
            key=[self.master_seed, 0],
        )
        return np.random.Generator(bitgen)


@dataclass(frozen=True, eq=False)
class FadingState:
    """One block-fading realization of all channel power gains.

    ``g`` and ``e`` are each either a length-K array, a scalar, or None,
    following the network variant's topology; ``f`` is an optional scalar.
    """

    h: np.ndarray
    g: np.ndarray | float | None = None
    e: np.ndarray | float | None = None
    f: float | None = None

    def __post_init__(self) -> None:
        h = np.asarray(self.h, dtype=float)
        if h.ndim != 1 or h.size == 0:
            raise StructureError("h must be a nonempty 1-D array of gains")
        object.__setattr__(self, "h", h)
        for name in ("g", "e"):
            value = getattr(self, name)
            if value is None:
                continue
            if np.isscalar(value):
                object.__setattr__(self, name, float(value))
            else:
                object.__setattr__(self, name, np.asarray(value, dtype=float))
        for name in ("h", "g", "e", "f"):
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.asarray(value)
            if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
                raise StructureError(f"{name} gains must be finite and >= 0")

    @property
    def users(self) -> int:
        return self.h.shape[0]

    def check_shape(self, config: NetworkConfig) -> None:
        """Raise StructureError unless this state's shapes match the config."""
        variant = config.kind.variant
        if self.users != config.users:
            raise StructureError(f"state has {self.users} users, config has {config.users}")

        def _expect(name: str, value, want: str) -> None:
            if want == "absent":
                if value is not None:
                    raise StructureError(f"{name} must be absent for {variant.value}")
            elif want == "scalar":
                if not isinstance(value, float):
                    raise StructureError(f"{name} must be a scalar gain for {variant.value}")
            else:
                if not isinstance(value, np.ndarray) or value.shape != (config.users,):
                    raise StructureError(f"{name} must be a length-K sequence for {variant.value}")

        if variant is NetworkVariant.CMAC:
            _expect("g", self.g, "sequence")
            _expect("e", self.e, "scalar")
        elif variant is NetworkVariant.CBC:
            _expect("g", self.g, "scalar")
            _expect("e", self.e, "sequence")
        elif variant is NetworkVariant.CPAC:
            _expect("g", self.g, "sequence")
            _expect("e", self.e, "sequence")
        else:
            _expect("g", self.g, "absent")
            _expect("e", self.e, "absent")


def sample_state(config: NetworkConfig, rng: RngSpec, sample_index: int) -> FadingState:
    """Draw one independent block-fading realization.

    The draw order within each substream is fixed (users 0..K-1), so the
    gains of user k are identical across configs that differ only in K.

    Args:
        config: validated network description.
        rng: substream derivation spec.
        sample_index: which independent fading block to produce.

    Returns:
        FadingState with shapes matching ``config.kind``.
    """
    variant = config.kind.variant
    K = config.users
    h = config.dist_h.sample(rng.stream(sample_index, ChannelRole.H), K)
    g: np.ndarray | float | None = None
    e: np.ndarray | float | None = None
    if variant is NetworkVariant.CMAC:
        g = config.dist_g.sample(rng.stream(sample_index, ChannelRole.G), K)
        e = config.dist_e.sample(rng.stream(sample_index, ChannelRole.E))
    elif variant is NetworkVariant.CBC:
        g = config.dist_g.sample(rng.stream(sample_index, ChannelRole.G))
        e = config.dist_e.sample(rng.stream(sample_index, ChannelRole.E), K)
    elif variant is NetworkVariant.CPAC:
        g = config.dist_g.sample(rng.stream(sample_index, ChannelRole.G), K)
        e = config.dist_e.sample(rng.stream(sample_index, ChannelRole.E), K)
    f = None
    if config.include_pr_link:
        f = config.dist_f.sample(rng.stream(sample_index, ChannelRole.F))
    return FadingState(h=h, g=g, e=e, f=f)
