"""Rate-distortion functions of the symmetric bivariate Gaussian source.

Covers the joint description rate R(d1, d2) for one encoder observing both
components, the conditional rate when the other component is known at both
ends, and the closed-form inverse of the joint rate along the diagonal
d1 = d2. All rates are in bits per source pair.

The (d1, d2) plane splits into three regions:

  A: both targets bind and uncorrelated reconstruction errors are optimal;
  B: the targets are unbalanced enough that correlating the errors buys
     rate, which the squared cross term in the branch formula accounts for;
  C: the larger target is implied for free by meeting the smaller one, so
     only the smaller target costs rate.

Region C is written for "d2 large"; the mirrored case (d1 large) is folded
in so that the function is total and symmetric under swapping (d1, d2),
which equality of the component variances forces anyway. Targets above the
source variance are equivalent to the variance itself (estimating by the
mean already achieves it), so they are clamped before classification.
"""

from __future__ import annotations

import enum
import math

from .model import DistortionPair, ParameterError, SourceParams


class Region(enum.Enum):
    """Which branch of the joint rate-distortion function applies."""

    A = "A"
    B = "B"
    C = "C"


def _clamped(source: SourceParams, d: DistortionPair) -> tuple[float, float]:
    return min(d.d1, source.sigma2), min(d.d2, source.sigma2)


def classify_region(source: SourceParams, d: DistortionPair) -> Region:
    """Locate (d1, d2) in the region partition.

    Boundary points go to the first matching region in the order A, B, C
    (A and B are closed where their defining inequalities are non-strict,
    C is open at its lower boundary). The branch formulas agree on the
    boundaries, so the tie-break never changes a rate value.
    """
    s2 = source.sigma2
    rho = source.rho
    d1, d2 = _clamped(source, d)
    # Region A in cross-multiplied form, symmetric and division-free:
    # d2 <= (s2(1-rho^2) - d1) * s2 / (s2 - d1) on d1 <= s2(1-rho^2).
    if s2 * (d1 + d2) - d1 * d2 <= s2 * s2 * (1.0 - rho * rho):
        return Region.A
    if max(d1, d2) > s2 * (1.0 - rho * rho) + rho * rho * min(d1, d2):
        return Region.C
    return Region.B


def joint_rd(source: SourceParams, d: DistortionPair) -> float:
    """Joint rate-distortion function R(d1, d2) in bits per source pair."""
    s2 = source.sigma2
    rho = source.rho
    d1, d2 = _clamped(source, d)
    if rho >= 1.0:
        # Identical components: describing the one with the tighter target
        # covers the other. The region-B formula degenerates to 0/0 on the
        # diagonal here, and this is its continuity limit.
        return 0.5 * math.log2(s2 / min(d1, d2))
    region = classify_region(source, d)
    if region is Region.A:
        return 0.5 * math.log2(s2 * s2 * (1.0 - rho * rho) / (d1 * d2))
    if region is Region.B:
        gap = rho * s2 - math.sqrt((s2 - d1) * (s2 - d2))
        den = d1 * d2 - gap * gap
        if den <= 0.0:
            raise ArithmeticError("inconsistent region evaluation")
        return 0.5 * math.log2(s2 * s2 * (1.0 - rho * rho) / den)
    return 0.5 * math.log2(s2 / min(d1, d2))


def conditional_rd(source: SourceParams, d: float) -> float:
    """Rate to describe one component at MSE d when the other is known.

    Equals half the log of conditional variance over target, floored at
    zero once the target exceeds the conditional variance s2 * (1 - rho^2).
    """
    if not (math.isfinite(d) and d > 0.0):
        raise ParameterError("d must be positive and finite")
    cond_var = source.sigma2 * (1.0 - source.rho ** 2)
    if d >= cond_var:
        return 0.0
    return 0.5 * math.log2(cond_var / d)


def diagonal_branch_rate(source: SourceParams) -> float:
    """Rate at which the diagonal d1 = d2 crosses from region B into A.

    The crossing sits at d = s2 * (1 - rho); for rho = 1 the diagonal never
    reaches region A and the returned rate is infinite.
    """
    if source.rho >= 1.0:
        return math.inf
    return 0.5 * math.log2((1.0 + source.rho) / (1.0 - source.rho))


def symmetric_joint_rd_inverse(source: SourceParams, rate: float) -> float:
    """Smallest d with R(d, d) <= rate, via the closed-form branch inverses.

    High rates land in region A where d = s2 * sqrt(1 - rho^2) * 2^-rate;
    low rates in region B where d = (s2 (1+rho) 4^-rate + s2 (1-rho)) / 2.
    """
    if not (math.isfinite(rate) and rate >= 0.0):
        raise ParameterError("rate must be nonnegative and finite")
    s2 = source.sigma2
    rho = source.rho
    if rate >= diagonal_branch_rate(source):
        return s2 * math.sqrt(1.0 - rho * rho) * 2.0 ** (-rate)
    return 0.5 * s2 * ((1.0 + rho) * 2.0 ** (-2.0 * rate) + (1.0 - rho))
