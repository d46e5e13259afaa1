"""Parameter containers and loss/noise algebra for a Gaussian CV-QKD link.

Every variance in this package is expressed in shot-noise units: the
quadrature variance of the vacuum equals 1. A quadrature of variance ``V``
sent through a channel of transmittance ``T`` with excess noise ``v_eps``
arrives with variance ``T*V + (1 - T) + v_eps``.

The containers are frozen dataclasses that validate on construction, so a
value that made it into one of them can be trusted downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SINGLE = "single"
DOUBLE = "double"
MODIFIED = "modified"

# Default error budgets: two-sided significance of the parameter confidence
# region, and the failure/smoothing budget of the finite-size penalty.
DEFAULT_DELTA = 1e-10
DEFAULT_DELTA_STAR = 1e-10
DEFAULT_BETA = 0.95


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class ChannelParams:
    """Lossy bosonic channel: transmittance plus additive excess noise."""

    T: float
    v_eps: float = 0.0

    def __post_init__(self):
        _require(_finite(self.T) and 0.0 <= self.T <= 1.0,
                 f"transmittance must lie in [0, 1], got {self.T!r}")
        _require(_finite(self.v_eps) and self.v_eps >= 0.0,
                 f"excess noise must be >= 0, got {self.v_eps!r}")


@dataclass(frozen=True)
class SourceParams:
    """Quadrature variance of the sender's source in the modulated direction.

    ``v_s = 1`` is a coherent source; ``v_s < 1`` means the modulated
    quadrature is squeezed (the conjugate one then carries ``1/v_s``).
    """

    v_s: float = 1.0

    def __post_init__(self):
        _require(_finite(self.v_s) and self.v_s > 0.0,
                 f"source variance must be > 0, got {self.v_s!r}")


@dataclass(frozen=True)
class ModulationParams:
    """Gaussian modulation variances.

    ``scheme = "single"`` uses one displacement of variance ``v`` which
    doubles as key material and channel probe. ``scheme = "double"`` stacks
    a key displacement ``v1`` and a dedicated probe displacement ``v2``.
    """

    scheme: str
    v: float | None = None
    v1: float | None = None
    v2: float | None = None

    def __post_init__(self):
        _require(self.scheme in (SINGLE, DOUBLE),
                 f"modulation scheme must be {SINGLE!r} or {DOUBLE!r}, got {self.scheme!r}")
        if self.scheme == SINGLE:
            _require(self.v is not None and _finite(self.v) and self.v >= 0.0,
                     "single modulation needs a variance v >= 0")
        else:
            _require(self.v1 is not None and _finite(self.v1) and self.v1 >= 0.0,
                     "double modulation needs a key variance v1 >= 0")
            _require(self.v2 is not None and _finite(self.v2) and self.v2 > 0.0,
                     "double modulation needs a probe variance v2 > 0")

    @property
    def v_key(self) -> float:
        """Variance of the displacement that actually carries key."""
        return self.v if self.scheme == SINGLE else self.v1


@dataclass(frozen=True)
class ProtocolParams:
    """Everything the finite-size rate needs besides the channel itself.

    ``r`` is the fraction of the block sacrificed for estimation in
    schemes that disclose samples; the key is distilled from the
    remaining ``n = (1 - r) * N``.
    """

    source: SourceParams
    modulation: ModulationParams
    N: int
    r: float = 0.0
    beta: float = DEFAULT_BETA
    delta: float = DEFAULT_DELTA
    delta_star: float = DEFAULT_DELTA_STAR

    def __post_init__(self):
        _require(isinstance(self.N, int) and self.N >= 2,
                 f"block size N must be an integer >= 2, got {self.N!r}")
        _require(_finite(self.r) and 0.0 <= self.r <= 1.0,
                 f"disclosed fraction r must lie in [0, 1], got {self.r!r}")
        _require(_finite(self.beta) and 0.0 < self.beta <= 1.0,
                 f"reconciliation efficiency must lie in (0, 1], got {self.beta!r}")
        _require(_finite(self.delta) and 0.0 < self.delta < 1.0,
                 f"confidence budget delta must lie in (0, 1), got {self.delta!r}")
        _require(_finite(self.delta_star) and 0.0 < self.delta_star < 1.0,
                 f"penalty budget delta_star must lie in (0, 1), got {self.delta_star!r}")

    @property
    def n(self) -> float:
        """Samples left for key distillation."""
        return (1.0 - self.r) * self.N

    @property
    def m(self) -> float:
        """Samples consumed by channel estimation.

        Single modulation discloses a subset; double modulation re-uses the
        whole block because the probe displacement is public anyway.
        """
        return self.r * self.N if self.modulation.scheme == SINGLE else float(self.N)


@dataclass(frozen=True)
class FiberModel:
    """Distance-to-channel map for standard telecom fiber."""

    attenuation_db_per_km: float = 0.2
    eps_ratio: float = 0.01  # excess noise as a fraction of the transmittance

    def __post_init__(self):
        _require(_finite(self.attenuation_db_per_km) and self.attenuation_db_per_km > 0.0,
                 f"attenuation must be > 0 dB/km, got {self.attenuation_db_per_km!r}")
        _require(_finite(self.eps_ratio) and self.eps_ratio >= 0.0,
                 f"eps_ratio must be >= 0, got {self.eps_ratio!r}")


# --------------------------------------------------------------------------
# noise algebra


def aggregated_noise_variance(channel: ChannelParams, source: SourceParams) -> float:
    """Receiver-side variance of everything except the revealed modulation.

    For a single-modulation transmission this is the vacuum share, the
    excess noise, and the transmitted source fluctuation:
    ``1 + v_eps + T * (v_s - 1)``.
    """
    return 1.0 + channel.v_eps + channel.T * (source.v_s - 1.0)


def aggregated_noise_variance_double(channel: ChannelParams,
                                     source: SourceParams,
                                     modulation: ModulationParams) -> float:
    """Same as :func:`aggregated_noise_variance` when only the probe
    displacement is revealed, so the key displacement rides along as noise.
    """
    _require(modulation.scheme == DOUBLE,
             "the double-modulation noise variance needs a double modulation")
    return 1.0 + channel.v_eps + channel.T * (modulation.v1 + source.v_s - 1.0)


def distance_to_transmittance(distance_km: float, fiber: FiberModel = FiberModel()) -> float:
    """Transmittance of ``distance_km`` of fiber."""
    _require(_finite(distance_km) and distance_km >= 0.0,
             f"distance must be >= 0 km, got {distance_km!r}")
    return 10.0 ** (-fiber.attenuation_db_per_km * distance_km / 10.0)


def transmittance_to_distance(T: float, fiber: FiberModel = FiberModel()) -> float:
    """Fiber length whose transmittance is ``T``. Inverse of
    :func:`distance_to_transmittance` on (0, 1].
    """
    _require(_finite(T) and 0.0 < T <= 1.0,
             f"transmittance must lie in (0, 1], got {T!r}")
    return -10.0 * math.log10(T) / fiber.attenuation_db_per_km


def excess_noise_from_fiber(T: float, fiber: FiberModel = FiberModel()) -> float:
    """Excess noise of a fiber channel of transmittance ``T``.

    Modeled as proportional to the transmittance: noise picked up at the
    sender side is attenuated along with the signal.
    """
    _require(_finite(T) and 0.0 <= T <= 1.0,
             f"transmittance must lie in [0, 1], got {T!r}")
    return T * fiber.eps_ratio


def channel_at_distance(distance_km: float, fiber: FiberModel = FiberModel()) -> ChannelParams:
    """Channel parameters of a fiber link of the given length."""
    T = distance_to_transmittance(distance_km, fiber)
    return ChannelParams(T, excess_noise_from_fiber(T, fiber))
