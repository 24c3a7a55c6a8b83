"""Converse machinery: what no coding scheme, feedback or not, can beat.

The free parameter throughout is rho_tilde, the normalized time-averaged
correlation between the two transmitters' channel inputs. For any scheme,
the mutual-information flow through the channel is capped by three
capacity-style expressions in rho_tilde (`mac_rate_bounds`). Requiring the
source description rates to fit under those caps yields:

  * a feasibility test for an arbitrary distortion pair
    (`check_feasibility`), and
  * in the equal-power, equal-distortion case, two distortion lower-bound
    curves: `sum_rate_curve` (decreasing in rho_tilde, from the sum-rate
    cap) and `single_user_curve` (increasing, from the per-user cap).

No scheme can beat both curves at its own operating rho_tilde, so the
minimax over rho_tilde in [0, 1] is a valid lower bound on the optimal
distortion (`minimax_lower_bound`). Below the SNR threshold
rho / (1 - rho^2), uncoded transmission is exactly optimal and
`dstar_below_threshold` returns the optimum in closed form; above it only
the lower bound and the uncoded upper bound `uncoded_distortion` are
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ChannelParams, DistortionPair, ParameterError, SourceParams, snr_threshold
from .rate_distortion import conditional_rd, joint_rd

# Absolute slack, in rho_tilde units, when deciding whether the feasible
# interval is empty. Exactly-tight instances otherwise flip to infeasible
# on the last rounding of the interval endpoints.
_INTERVAL_SLACK = 1e-9

# Relative slack for "at or below the SNR threshold" comparisons, so that a
# threshold recomputed through p = snr * n0 still counts as below.
_THRESHOLD_RTOL = 1e-12


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the necessary-condition test for a distortion pair.

    rho_interval is the set of input correlations under which all three
    rate conditions hold; it is empty exactly when feasible is False.
    """

    feasible: bool
    rho_interval: tuple[float, float] | None
    witness: float | None


@dataclass(frozen=True)
class BoundResult:
    """Minimax distortion lower bound and where the minimax sits.

    active: "endpoint" when the minimum is at rho_tilde = 1 (both curves
    evaluated there, the decreasing one still on top), "crossing" when it
    is at the intersection of the two curves, where they are equal.
    """

    lower_bound: float
    rho_star: float
    active: str


def _check_rho_tilde(rho_tilde: float) -> float:
    rt = float(rho_tilde)
    if not (math.isfinite(rt) and 0.0 <= rt <= 1.0):
        raise ParameterError("rho_tilde out of range [0, 1]")
    return rt


def _check_power_noise(p: float, n0: float) -> None:
    if not (math.isfinite(p) and p > 0.0):
        raise ParameterError("p must be positive and finite")
    if not (math.isfinite(n0) and n0 > 0.0):
        raise ParameterError("n0 must be positive and finite")


def mac_rate_bounds(channel: ChannelParams, rho_tilde: float) -> tuple[float, float, float]:
    """Capacity-style caps on the channel's information flow, in bits.

    Returns (sum-rate cap, user-1 cap, user-2 cap) for inputs whose
    normalized average correlation is rho_tilde. Correlated inputs raise
    the sum-rate cap and lower the per-user caps.
    """
    rt = _check_rho_tilde(rho_tilde)
    sum_cap = 0.5 * math.log2(
        1.0 + (channel.p1 + channel.p2 + 2.0 * rt * math.sqrt(channel.p1 * channel.p2)) / channel.n0
    )
    one_minus = 1.0 - rt * rt
    cap1 = 0.5 * math.log2(1.0 + channel.p1 * one_minus / channel.n0)
    cap2 = 0.5 * math.log2(1.0 + channel.p2 * one_minus / channel.n0)
    return sum_cap, cap1, cap2


def check_feasibility(source: SourceParams, channel: ChannelParams, d: DistortionPair) -> FeasibilityResult:
    """Test whether any scheme could reach the distortion pair d.

    Inverts the three conditions of `mac_rate_bounds` in closed form: the
    sum-rate condition lower-bounds rho_tilde and the two per-user
    conditions upper-bound it, so the admissible set is an interval. The
    conditions are necessary only; an infeasible pair is certainly
    unreachable, a feasible one is not guaranteed reachable.
    """
    r_joint = joint_rd(source, d)
    r1 = conditional_rd(source, d.d1)
    r2 = conditional_rd(source, d.d2)

    # Sum-rate condition: 4^r_joint - 1 <= (p1 + p2 + 2 rt sqrt(p1 p2)) / n0.
    lo = ((4.0 ** r_joint - 1.0) * channel.n0 - channel.p1 - channel.p2) / (
        2.0 * math.sqrt(channel.p1 * channel.p2)
    )
    lo = max(lo, 0.0)

    # Per-user conditions: rt^2 <= 1 - (4^r_i - 1) n0 / p_i; a negative
    # radicand rules out every rho_tilde.
    hi = 1.0
    for r_i, p_i in ((r1, channel.p1), (r2, channel.p2)):
        radicand = 1.0 - (4.0 ** r_i - 1.0) * channel.n0 / p_i
        if radicand < 0.0:
            return FeasibilityResult(False, None, None)
        hi = min(hi, math.sqrt(radicand))

    # hi <= 1 always, so this also rejects lower endpoints above 1.
    if lo > hi + _INTERVAL_SLACK:
        return FeasibilityResult(False, None, None)
    lo = min(lo, hi)  # collapse sub-slack inversions to a point
    return FeasibilityResult(True, (lo, hi), 0.5 * (lo + hi))


def sum_rate_curve(source: SourceParams, p: float, n0: float, rho_tilde: float) -> float:
    """Distortion lower bound from the sum-rate condition, equal-power case.

    Two branches depending on whether p/n0 is below the SNR threshold
    (the diagonal of the joint rate-distortion function is then inverted
    on its low-rate branch) or above it (high-rate branch). Nonincreasing
    in rho_tilde.
    """
    rt = _check_rho_tilde(rho_tilde)
    _check_power_noise(p, n0)
    s2 = source.sigma2
    rho = source.rho
    den = n0 + 2.0 * p * (1.0 + rt)
    if rho >= 1.0 or p / n0 <= snr_threshold(source):
        return 0.5 * (n0 * s2 * (1.0 + rho) / den + s2 * (1.0 - rho))
    return s2 * math.sqrt(n0 * (1.0 - rho * rho) / den)


def single_user_curve(source: SourceParams, p: float, n0: float, rho_tilde: float) -> float:
    """Distortion lower bound from the per-user condition, equal-power case.

    Nondecreasing in rho_tilde: correlated inputs choke the private rate.
    """
    rt = _check_rho_tilde(rho_tilde)
    _check_power_noise(p, n0)
    return source.sigma2 * n0 * (1.0 - source.rho ** 2) / (n0 + p * (1.0 - rt * rt))


def endpoint_snr_threshold(source: SourceParams) -> float:
    """SNR below which the minimax sits at rho_tilde = 1 rather than at a
    crossing of the two curves: rho^2 / (2 (1 - rho) (1 + 2 rho))."""
    rho = source.rho
    if rho >= 1.0:
        return math.inf
    return rho * rho / (2.0 * (1.0 - rho) * (1.0 + 2.0 * rho))


def minimax_lower_bound(source: SourceParams, p: float, n0: float) -> BoundResult:
    """Lower bound on the best common distortion at equal powers.

    Minimizes max(sum_rate_curve, single_user_curve) over rho_tilde in
    [0, 1]. Since one curve is nonincreasing and the other nondecreasing,
    the minimum is at rho_tilde = 1 when p/n0 is at or below
    `endpoint_snr_threshold`, and otherwise at the unique crossing, which
    bisection locates to |difference| <= 1e-12 * sigma2 (or to float
    granularity when the curves are too steep for that, in which case the
    returned value is still a valid bound).
    """
    _check_power_noise(p, n0)
    tol = 1e-12 * source.sigma2

    if p / n0 <= endpoint_snr_threshold(source):
        return BoundResult(sum_rate_curve(source, p, n0, 1.0), 1.0, "endpoint")

    def gap(rt: float) -> float:
        return sum_rate_curve(source, p, n0, rt) - single_user_curve(source, p, n0, rt)

    g_lo = gap(0.0)
    g_hi = gap(1.0)
    if g_lo <= 0.0:
        # The increasing curve already dominates at rho_tilde = 0; no
        # crossing exists. Not reachable for valid parameters.
        if g_lo == 0.0:
            return BoundResult(single_user_curve(source, p, n0, 0.0), 0.0, "crossing")
        raise ArithmeticError("no crossing found")
    if g_hi >= 0.0:
        # Numerically at the endpoint threshold despite the test above.
        return BoundResult(sum_rate_curve(source, p, n0, 1.0), 1.0, "endpoint")

    lo, hi = 0.0, 1.0
    best_rt, best_gap = 0.5, math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if abs(g_mid) < abs(best_gap):
            best_rt, best_gap = mid, g_mid
        if abs(g_mid) <= tol or hi - lo <= 1e-17:
            break
        if g_mid > 0.0:
            lo = mid
        else:
            hi = mid
    value = max(
        sum_rate_curve(source, p, n0, best_rt),
        single_user_curve(source, p, n0, best_rt),
    )
    return BoundResult(value, best_rt, "crossing")


def below_snr_threshold(source: SourceParams, p: float, n0: float) -> bool:
    """True when p/n0 is at or below the uncoded-optimality threshold
    (with a 1e-12 relative slack so recomputed boundary points count)."""
    _check_power_noise(p, n0)
    if source.rho >= 1.0:
        return True
    return p / n0 <= snr_threshold(source) * (1.0 + _THRESHOLD_RTOL)


def uncoded_distortion(source: SourceParams, p: float, n0: float) -> float:
    """Distortion of plain scaled transmission with conditional-mean decoding.

    Valid at any SNR as an achievable upper bound; it equals the optimum
    exactly when p/n0 is at or below the SNR threshold.
    """
    _check_power_noise(p, n0)
    s2 = source.sigma2
    rho = source.rho
    return s2 * (p * (1.0 - rho * rho) + n0) / (2.0 * p * (1.0 + rho) + n0)


def dstar_below_threshold(source: SourceParams, p: float, n0: float) -> float:
    """Exact minimal common distortion when p/n0 is at or below the SNR
    threshold, where uncoded transmission is optimal and feedback buys
    nothing. Raises above the threshold, where only bounds are known."""
    if not below_snr_threshold(source, p, n0):
        raise ParameterError("above threshold: D* unknown, only lower bound available")
    return uncoded_distortion(source, p, n0)
