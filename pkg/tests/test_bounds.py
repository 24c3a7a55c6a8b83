import math

import numpy as np
import pytest

from gmacfb import (
    ChannelParams,
    DistortionPair,
    ParameterError,
    SourceParams,
    below_snr_threshold,
    check_feasibility,
    dstar_below_threshold,
    endpoint_snr_threshold,
    mac_rate_bounds,
    minimax_lower_bound,
    single_user_curve,
    snr_threshold,
    sum_rate_curve,
    uncoded_distortion,
)

HALF = SourceParams(1.0, 0.5)

# Frozen oracle values (direct evaluation / exact quartic root, computed
# independently of the implementation).
XI_ENDPOINT = 0.7857142857142857         # 0.5 * (1.5/1.4 + 0.5)
XI_RHO0 = 0.5773502691896257             # sqrt(1/3)
CAP_SUM_TIGHT = 0.792481250360578            # 0.5 * log2(3)
CAP_IND_TIGHT = 0.2924812503605781           # 0.5 * log2(1.5)
CROSS_RHO0_STAR = 0.3111078174659819     # root of x^4 - 4x^2 - 2x + 1 in [0,1]
CROSS_RHO0_VALUE = 0.525427560843517     # 1 / (2 - root^2)
DSTAR_03_02 = 0.7776315789473683         # (0.2*0.91 + 1) / (0.4*1.3 + 1)


class TestMacRateBounds:
    def test_tight_point_triple(self):
        caps = mac_rate_bounds(ChannelParams(2.0 / 3.0, 2.0 / 3.0, 1.0), 0.5)
        assert caps[0] == pytest.approx(CAP_SUM_TIGHT, abs=1e-12)
        assert caps[1] == pytest.approx(CAP_IND_TIGHT, abs=1e-12)
        assert caps[2] == pytest.approx(CAP_IND_TIGHT, abs=1e-12)

    def test_uncorrelated_inputs_sum_rate(self):
        ch = ChannelParams(1.5, 0.5, 2.0)
        caps = mac_rate_bounds(ch, 0.0)
        assert caps[0] == pytest.approx(0.5 * math.log2(1.0 + 2.0 / 2.0), abs=1e-15)

    def test_fully_correlated_kills_private_rates(self):
        caps = mac_rate_bounds(ChannelParams(3.0, 3.0, 1.0), 1.0)
        assert caps[1] == 0.0
        assert caps[2] == 0.0
        assert caps[0] == pytest.approx(0.5 * math.log2(1.0 + 12.0), abs=1e-15)

    @pytest.mark.parametrize("rt", [-0.1, 1.1, math.nan])
    def test_rejects_bad_correlation(self, rt):
        with pytest.raises(ParameterError, match="rho_tilde out of range"):
            mac_rate_bounds(ChannelParams(1.0, 1.0, 1.0), rt)


class TestCheckFeasibility:
    def test_tight_point_degenerates_to_singleton(self):
        ch = ChannelParams(2.0 / 3.0, 2.0 / 3.0, 1.0)
        res = check_feasibility(HALF, ch, DistortionPair(0.5, 0.5))
        assert res.feasible
        lo, hi = res.rho_interval
        assert lo == pytest.approx(0.5, abs=1e-9)
        assert hi == pytest.approx(0.5, abs=1e-9)
        assert lo <= res.witness <= hi

    def test_below_optimum_is_infeasible(self):
        ch = ChannelParams(2.0 / 3.0, 2.0 / 3.0, 1.0)
        res = check_feasibility(HALF, ch, DistortionPair(0.4, 0.4))
        assert not res.feasible
        assert res.rho_interval is None and res.witness is None

    def test_zero_rate_admits_everything(self):
        src = SourceParams(1.0, 0.0)
        res = check_feasibility(src, ChannelParams(0.3, 5.0, 2.0), DistortionPair(1.0, 1.0))
        assert res.feasible
        assert res.rho_interval == (0.0, 1.0)

    def test_witness_satisfies_all_three_conditions(self):
        from gmacfb import conditional_rd, joint_rd

        src = SourceParams(1.3, 0.6)
        ch = ChannelParams(0.8, 1.4, 0.9)
        pair = DistortionPair(0.5, 0.7)
        res = check_feasibility(src, ch, pair)
        assert res.feasible
        caps = mac_rate_bounds(ch, res.witness)
        assert joint_rd(src, pair) <= caps[0] + 1e-9
        assert conditional_rd(src, pair.d1) <= caps[1] + 1e-9
        assert conditional_rd(src, pair.d2) <= caps[2] + 1e-9

    def test_tight_at_full_input_correlation(self):
        # Zero conditional rates and a sum condition solvable only at
        # rho_tilde = 1: rounding pushes the lower endpoint a hair above 1
        # and the emptiness slack must still call it feasible.
        res = check_feasibility(HALF, ChannelParams(0.125, 0.125, 1.0), DistortionPair(0.75, 0.75))
        assert res.feasible
        lo, hi = res.rho_interval
        assert lo == pytest.approx(1.0, abs=1e-9)
        assert hi == 1.0
        assert lo <= res.witness <= hi

    def test_asymmetric_power_starvation(self):
        # User 1 has far too little power for a fine description of s1.
        src = SourceParams(1.0, 0.0)
        res = check_feasibility(src, ChannelParams(0.01, 10.0, 1.0), DistortionPair(0.05, 0.9))
        assert not res.feasible

    def test_feasible_iff_distortion_above_minimax(self):
        # The interval test and the minimax bound describe the same frontier.
        p, n0 = 0.3, 1.0
        bound = minimax_lower_bound(HALF, p, n0).lower_bound
        ch = ChannelParams(p, p, n0)
        for offset in (-1e-4, -1e-6, 1e-6, 1e-4, 1e-2):
            d = bound + offset
            res = check_feasibility(HALF, ch, DistortionPair(d, d))
            assert res.feasible == (offset > 0), f"offset {offset}"

    def test_frontier_matches_bound_across_grid(self):
        # Same frontier check across both sides of the SNR threshold and
        # both minimax regimes (endpoint and crossing).
        for rho in (0.1, 0.3, 0.5, 0.7, 0.9):
            src = SourceParams(1.0, rho)
            thr = snr_threshold(src)
            for frac in (0.05, 0.3, 0.95, 1.0, 1.05, 3.0):
                p = thr * frac
                bound = minimax_lower_bound(src, p, 1.0).lower_bound
                ch = ChannelParams(p, p, 1.0)
                for offset in (-3e-9, 3e-9):
                    d = bound + offset
                    res = check_feasibility(src, ch, DistortionPair(d, d))
                    assert res.feasible == (offset > 0), (rho, frac, offset)


class TestCurves:
    def test_sum_rate_curve_below_threshold_branch(self):
        assert sum_rate_curve(HALF, 0.1, 1.0, 1.0) == pytest.approx(XI_ENDPOINT, abs=1e-12)

    def test_sum_rate_curve_at_threshold_crossing_point(self):
        assert sum_rate_curve(HALF, 2.0 / 3.0, 1.0, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_sum_rate_curve_above_threshold_branch(self):
        src = SourceParams(1.0, 0.0)
        assert sum_rate_curve(src, 1.0, 1.0, 0.0) == pytest.approx(XI_RHO0, abs=1e-12)

    def test_single_user_curve_values(self):
        assert single_user_curve(HALF, 2.0 / 3.0, 1.0, 0.5) == pytest.approx(0.5, abs=1e-12)
        assert single_user_curve(HALF, 0.1, 1.0, 1.0) == pytest.approx(0.75, abs=1e-12)

    def test_single_user_curve_degenerate_correlation(self):
        src = SourceParams(1.0, 1.0)
        assert single_user_curve(src, 3.0, 0.7, 0.3) == 0.0

    def test_monotonicity_on_grid(self):
        grid = np.linspace(0.0, 1.0, 201)
        for rho in (0.0, 0.3, 0.7, 0.95):
            src = SourceParams(1.0, rho)
            for p in (0.05, 0.5, 2.0, 20.0):
                dec = [sum_rate_curve(src, p, 1.0, float(t)) for t in grid]
                inc = [single_user_curve(src, p, 1.0, float(t)) for t in grid]
                assert all(b <= a + 1e-15 for a, b in zip(dec, dec[1:]))
                assert all(b >= a - 1e-15 for a, b in zip(inc, inc[1:]))

    def test_sum_rate_equals_uncoded_at_source_correlation(self):
        # Below threshold the decreasing curve evaluated at the source
        # correlation reproduces the uncoded distortion identically.
        for rho in (0.1, 0.5, 0.9):
            src = SourceParams(1.0, rho)
            thr = snr_threshold(src)
            for frac in (0.2, 0.7, 1.0):
                p = thr * frac
                assert sum_rate_curve(src, p, 1.0, rho) == pytest.approx(
                    uncoded_distortion(src, p, 1.0), abs=1e-14
                )


class TestMinimaxLowerBound:
    def test_threshold_point(self):
        res = minimax_lower_bound(HALF, 2.0 / 3.0, 1.0)
        assert res.lower_bound == pytest.approx(0.5, abs=1e-9)
        assert res.rho_star == pytest.approx(0.5, abs=1e-6)
        assert res.active == "crossing"

    def test_endpoint_regime(self):
        res = minimax_lower_bound(HALF, 0.1, 1.0)
        assert res.lower_bound == pytest.approx(XI_ENDPOINT, abs=1e-12)
        assert res.rho_star == 1.0
        assert res.active == "endpoint"

    def test_rho_zero_crossing_matches_quartic_root(self):
        res = minimax_lower_bound(SourceParams(1.0, 0.0), 1.0, 1.0)
        assert res.active == "crossing"
        assert res.rho_star == pytest.approx(CROSS_RHO0_STAR, abs=1e-9)
        assert res.lower_bound == pytest.approx(CROSS_RHO0_VALUE, abs=1e-12)

    def test_reported_bound_matches_curves_at_rho_star(self):
        for rho in (0.0, 0.2, 0.6, 0.9):
            src = SourceParams(1.0, rho)
            for p in (0.05, 0.4, 3.0):
                res = minimax_lower_bound(src, p, 1.0)
                recomputed = max(
                    sum_rate_curve(src, p, 1.0, res.rho_star),
                    single_user_curve(src, p, 1.0, res.rho_star),
                )
                assert res.lower_bound == pytest.approx(recomputed, abs=1e-15)

    def test_endpoint_boundary_switch(self):
        te = endpoint_snr_threshold(HALF)
        assert te == pytest.approx(0.125, abs=1e-15)
        below = minimax_lower_bound(HALF, te * 0.999, 1.0)
        above = minimax_lower_bound(HALF, te * 1.001, 1.0)
        assert below.rho_star == 1.0 and below.active == "endpoint"
        assert above.rho_star < 1.0 and above.active == "crossing"

    def test_crossing_gap_within_tolerance(self):
        for rho in (0.0, 0.3, 0.8):
            src = SourceParams(1.0, rho)
            te = endpoint_snr_threshold(src)
            for p in (0.5, 2.0, 8.0):
                res = minimax_lower_bound(src, p, 1.0)
                if p <= te:
                    assert res.active == "endpoint"
                    continue
                assert res.active == "crossing"
                gap = abs(
                    sum_rate_curve(src, p, 1.0, res.rho_star)
                    - single_user_curve(src, p, 1.0, res.rho_star)
                )
                assert gap <= 1e-12

    def test_scales_with_variance(self):
        res1 = minimax_lower_bound(SourceParams(1.0, 0.4), 0.7, 1.0)
        res2 = minimax_lower_bound(SourceParams(2.5, 0.4), 0.7, 1.0)
        assert res2.lower_bound == pytest.approx(2.5 * res1.lower_bound, rel=1e-12)
        assert res2.rho_star == pytest.approx(res1.rho_star, abs=1e-12)

    def test_never_exceeds_uncoded(self):
        # The converse can never sit above what uncoded transmission achieves.
        for rho in (0.1, 0.4, 0.7, 0.9):
            src = SourceParams(1.0, rho)
            for snr in np.linspace(0.02, 6.0, 23):
                bound = minimax_lower_bound(src, float(snr), 1.0).lower_bound
                assert bound <= uncoded_distortion(src, float(snr), 1.0) + 1e-12


class TestDstarAndUncoded:
    def test_dstar_at_threshold(self):
        assert dstar_below_threshold(HALF, 2.0 / 3.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_dstar_interior_point(self):
        src = SourceParams(1.0, 0.3)
        assert dstar_below_threshold(src, 0.2, 1.0) == pytest.approx(DSTAR_03_02, abs=1e-15)

    def test_dstar_rejects_above_threshold(self):
        with pytest.raises(ParameterError, match="above threshold"):
            dstar_below_threshold(HALF, 1.0, 1.0)

    def test_dstar_fully_correlated_always_below(self):
        src = SourceParams(1.0, 1.0)
        assert dstar_below_threshold(src, 10.0, 1.0) == pytest.approx(1.0 / 41.0, abs=1e-15)

    def test_uncoded_examples(self):
        assert uncoded_distortion(HALF, 1.0, 1.0) == pytest.approx(0.4375, abs=1e-15)
        assert uncoded_distortion(SourceParams(1.0, 0.0), 1.0, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_uncoded_vanishing_power_limit(self):
        assert uncoded_distortion(HALF, 1e-12, 1.0) == pytest.approx(1.0, abs=1e-11)

    def test_uncoded_high_power_limit(self):
        assert uncoded_distortion(HALF, 1e12, 1.0) == pytest.approx(0.25, abs=1e-10)

    def test_below_threshold_predicate(self):
        thr = snr_threshold(HALF)
        assert below_snr_threshold(HALF, thr, 1.0)
        assert below_snr_threshold(HALF, thr * (1.0 - 1e-9), 1.0)
        assert not below_snr_threshold(HALF, thr * 1.001, 1.0)
        assert below_snr_threshold(SourceParams(1.0, 1.0), 100.0, 1.0)

    def test_tightness_at_threshold_across_rhos(self):
        for rho in np.arange(0.1, 0.95, 0.1):
            src = SourceParams(1.0, float(rho))
            p = snr_threshold(src)
            bound = minimax_lower_bound(src, p, 1.0).lower_bound
            d_u = uncoded_distortion(src, p, 1.0)
            d_star = dstar_below_threshold(src, p, 1.0)
            assert abs(bound - d_u) <= 1e-9
            assert abs(bound - d_star) <= 1e-9
            assert d_u == pytest.approx(1.0 - float(rho), abs=1e-12)
