"""Problem parameters: source statistics, channel constraints, distortion targets.

All types are immutable value objects validated at construction, so anything
downstream can assume its inputs are sane. Correlation is restricted to
[0, 1] and both source components share one variance; the general case
reduces to this one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """A parameter is outside its allowed domain."""


def _check_source(sigma2: float, rho: float) -> None:
    if not (math.isfinite(sigma2) and sigma2 > 0.0):
        raise ParameterError("variance must be positive and finite")
    if not (math.isfinite(rho) and 0.0 <= rho <= 1.0):
        raise ParameterError("rho out of range [0, 1]")


def _check_channel(p1: float, p2: float, n0: float) -> None:
    for name, val in (("p1", p1), ("p2", p2), ("n0", n0)):
        if not (math.isfinite(val) and val > 0.0):
            raise ParameterError(f"{name} must be positive and finite")


def _check_distortion(d1: float, d2: float) -> None:
    for name, val in (("d1", d1), ("d2", d2)):
        if not (math.isfinite(val) and val > 0.0):
            raise ParameterError(f"{name} must be positive and finite")


@dataclass(frozen=True)
class SourceParams:
    """Memoryless bivariate Gaussian source with common variance.

    sigma2: per-component variance (source units squared).
    rho: correlation coefficient between the two components, in [0, 1].
    """

    sigma2: float
    rho: float

    def __post_init__(self) -> None:
        _check_source(self.sigma2, self.rho)


@dataclass(frozen=True)
class ChannelParams:
    """Two-user additive Gaussian channel: transmit powers and noise variance."""

    p1: float
    p2: float
    n0: float

    def __post_init__(self) -> None:
        _check_channel(self.p1, self.p2, self.n0)


@dataclass(frozen=True)
class DistortionPair:
    """Target mean squared errors for the two source components.

    Zero distortion would require infinite rate and is rejected outright.
    """

    d1: float
    d2: float

    def __post_init__(self) -> None:
        _check_distortion(self.d1, self.d2)


@dataclass(frozen=True)
class SymmetricCase:
    """Equal-power instance: both users transmit at power p over noise n0."""

    source: SourceParams
    p: float
    n0: float

    def __post_init__(self) -> None:
        _check_channel(self.p, self.p, self.n0)

    @property
    def snr(self) -> float:
        """Signal-to-noise ratio p / n0, recomputed on every access."""
        return self.p / self.n0


def validate(source: SourceParams, channel: ChannelParams) -> tuple[SourceParams, ChannelParams]:
    """Re-check every invariant and hand the bundle back unchanged.

    Constructors already validate; this exists so callers holding
    deserialized or otherwise tampered objects can re-assert soundness.
    """
    _check_source(source.sigma2, source.rho)
    _check_channel(channel.p1, channel.p2, channel.n0)
    return source, channel


def snr_threshold(source: SourceParams) -> float:
    """SNR below which uncoded transmission is optimal: rho / (1 - rho^2).

    Strictly increasing in rho on [0, 1). For rho = 1 the threshold would be
    infinite, which is rejected as a degenerate fully-correlated source.
    """
    if source.rho >= 1.0:
        raise ParameterError("threshold infinite: source components fully correlated")
    return source.rho / (1.0 - source.rho ** 2)
