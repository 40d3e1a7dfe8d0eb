"""
Tests for the outcome-manipulation cost-benefit arithmetic
"""
from fractions import Fraction

import numpy as np
import pytest

from eventperp.app.models import Regime, validate_scenario
from eventperp.app.services import CostBenefitService, RentService
from eventperp.app.utils.errors import (
    DegenerateProbability,
    InvalidParameter,
    MissingLeverage,
    ZeroCapital,
)


def scenario(**values):
    base = {'k_manip': 1e5, 'capital': 5e4, 'pi_yes': 0.3, 'p_detected': 0.10, 'penalty_factor': 10}
    base.update(values)
    return validate_scenario(base)


def random_scenarios(count, seed):
    rng = np.random.default_rng(seed)
    columns = zip(
        rng.uniform(0, 1e9, count),
        rng.uniform(1e3, 1e6, count),
        rng.uniform(0, 0.95, count),
        rng.uniform(0, 1, count),
        rng.uniform(0, 200, count),
    )
    for k_manip, capital, pi_yes, p_detected, penalty in columns:
        yield scenario(k_manip=float(k_manip), capital=float(capital), pi_yes=float(pi_yes),
                       p_detected=float(p_detected), penalty_factor=float(penalty))


# ============================================================
# VALIDATION
# ============================================================

class TestValidateScenario:

    def test_scenario_a_is_valid(self, scenario_a):
        assert scenario_a.k_manip == 1e5
        assert scenario_a.pi_yes == 0.3

    def test_zero_cost_boundary_is_valid(self):
        s = validate_scenario({'k_manip': 0, 'capital': 1, 'pi_yes': 0, 'p_detected': 0, 'penalty_factor': 0})
        assert s.k_manip == 0.0

    def test_certain_outcome_is_degenerate(self):
        with pytest.raises(DegenerateProbability):
            scenario(pi_yes=1.0)

    @pytest.mark.parametrize('field,value', [
        ('k_manip', -1), ('capital', -5), ('pi_yes', 1.5), ('p_detected', -0.1),
        ('penalty_factor', float('nan')), ('leverage', 0.5),
    ])
    def test_out_of_range_values_are_rejected(self, field, value):
        with pytest.raises(InvalidParameter):
            scenario(**{field: value})

    def test_values_are_not_clamped(self):
        s = scenario(p_detected=0.123456789)
        assert validate_scenario(s.to_dict()).to_dict() == s.to_dict()

    def test_event_class_maps_to_channel(self):
        assert scenario(event_class='sports').channel.value == 'OutcomeSports'
        with pytest.raises(InvalidParameter):
            scenario(event_class='lottery')


# ============================================================
# EXPECTED PROFIT
# ============================================================

class TestExpectedProfit:

    def test_scenario_a_at_five_times(self, scenario_a):
        """N = 2.5e5: 2.5e5 * 0.7 - 1e5 - 5e4 * 0.1 * 10 = +2.5e4"""
        s = scenario_a.with_values(leverage=5)
        assert CostBenefitService.expected_manipulation_profit(s) == pytest.approx(2.5e4)

    def test_scenario_a_at_four_times_is_negative(self, scenario_a):
        s = scenario_a.with_values(leverage=4)
        assert CostBenefitService.expected_manipulation_profit(s) == pytest.approx(-1.0e4)

    def test_costless_manipulation_is_profitable(self):
        s = scenario(k_manip=0, p_detected=0, leverage=1)
        assert CostBenefitService.expected_manipulation_profit(s) > 0

    def test_missing_leverage(self, scenario_a):
        with pytest.raises(MissingLeverage):
            CostBenefitService.expected_manipulation_profit(scenario_a)

    def test_profit_curve_crosses_zero_between_four_and_five(self, scenario_a):
        curve = CostBenefitService.profit_curve(scenario_a, [1, 4, 5, 10])
        profits = [point['profit'] for point in curve]
        assert profits[1] < 0 < profits[2]
        assert profits == sorted(profits)


# ============================================================
# THRESHOLD
# ============================================================

class TestLeverageThreshold:

    def test_scenario_a(self, scenario_a):
        """1.5e5 / 3.5e4"""
        result = CostBenefitService.leverage_threshold(scenario_a)
        assert result.l_star == pytest.approx(4.285714285714286)
        assert 4 <= result.l_star <= 5
        assert not result.always_profitable

    def test_scenario_a_exact(self, scenario_a):
        assert CostBenefitService.exact_leverage_threshold(scenario_a) == Fraction(30, 7)

    def test_scenario_b(self, scenario_b):
        """1.4e6 / 1.2e5, outside the stated 6-8x band"""
        assert CostBenefitService.leverage_threshold(scenario_b).l_star == pytest.approx(11.666666666666666)

    def test_zero_cost_is_clamped(self):
        result = CostBenefitService.leverage_threshold(scenario(k_manip=0, p_detected=0))
        assert result.l_star == 1.0
        assert result.raw_l_star == 0.0
        assert result.always_profitable

    def test_zero_capital(self):
        with pytest.raises(ZeroCapital):
            CostBenefitService.leverage_threshold(scenario(capital=0))

    def test_terms_sum_to_raw_threshold(self, scenario_b):
        result = CostBenefitService.leverage_threshold(scenario_b)
        assert result.cost_term + result.detection_term == pytest.approx(result.raw_l_star)

    def test_profit_is_zero_at_threshold(self):
        """Zero crossing over random valid scenarios"""
        for s in random_scenarios(10_000, seed=7):
            result = CostBenefitService.leverage_threshold(s)
            profit = CostBenefitService.profit_at(s, result.raw_l_star)
            scale = s.k_manip + s.capital * s.p_detected * s.penalty_factor + s.capital
            assert abs(profit) <= 1e-9 * scale

    def test_bisection_finds_the_same_boundary(self):
        """Search for the smallest profitable leverage without the closed form"""
        for s in random_scenarios(10_000, seed=11):
            raw = CostBenefitService.leverage_threshold(s).raw_l_star
            step = 1e-6 * max(1.0, raw)
            low, high = 0.0, 2.0 * raw + 1.0
            assert CostBenefitService.profit_at(s, high) > 0
            while high - low > step:
                mid = (low + high) / 2
                if CostBenefitService.profit_at(s, mid) > 0:
                    high = mid
                else:
                    low = mid
            assert abs(high - raw) <= step * (1 + 1e-9)

    def test_threshold_falls_with_capital_and_rises_with_cost(self, scenario_a):
        base = CostBenefitService.leverage_threshold(scenario_a).l_star
        richer = CostBenefitService.leverage_threshold(scenario_a.with_values(capital=1e5)).l_star
        costlier = CostBenefitService.leverage_threshold(scenario_a.with_values(k_manip=2e5)).l_star
        assert richer < base < costlier


# ============================================================
# REGIMES
# ============================================================

class TestClassifyRegime:

    def test_macro_base_is_cost_dominated(self):
        """cost_term = 1e9 / (1e5 * 0.5) = 2e4, detection_term = 100"""
        result = CostBenefitService.leverage_threshold(
            scenario(k_manip=1e9, capital=1e5, pi_yes=0.5, p_detected=0.5, penalty_factor=100)
        )
        assert result.cost_term == pytest.approx(2e4)
        assert result.detection_term == pytest.approx(100)
        assert result.l_star == pytest.approx(20100)
        assert result.regime is Regime.COST_DOMINATED

    def test_zero_cost_is_detection_dominated(self):
        result = CostBenefitService.leverage_threshold(
            scenario(k_manip=0, capital=5e4, pi_yes=0.5, p_detected=0.3, penalty_factor=50)
        )
        assert result.l_star == pytest.approx(30)
        assert result.regime is Regime.DETECTION_DOMINATED

    def test_equal_terms_are_mixed(self):
        """K / C = P * pen = 1"""
        result = CostBenefitService.leverage_threshold(
            scenario(k_manip=5e4, capital=5e4, pi_yes=0.0, p_detected=0.1, penalty_factor=10)
        )
        assert result.cost_term == pytest.approx(result.detection_term)
        assert CostBenefitService.classify_regime(result) is Regime.MIXED

    def test_custom_cutoff(self, scenario_a):
        """cost 2.857 vs detection 1.429"""
        result = CostBenefitService.leverage_threshold(scenario_a)
        assert CostBenefitService.classify_regime(result) is Regime.MIXED
        assert CostBenefitService.classify_regime(result, ratio_cutoff=1.5) is Regime.COST_DOMINATED


# ============================================================
# SWEEPS
# ============================================================

class TestSweepThresholds:

    AXES_A = {'k_manip': [5e4, 1e5, 5e5], 'p_detected': [0.05, 0.10, 0.30], 'penalty_factor': [5, 10, 30]}

    def test_scenario_a_grid(self, scenario_a):
        grid = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A)
        assert len(grid) == 27
        values = grid.l_star_values
        # (5e4 + 1.25e4) / 3.5e4 and (5e5 + 4.5e5) / 3.5e4
        assert min(values) == pytest.approx(1.7857142857142858)
        assert max(values) == pytest.approx(27.142857142857142)

    def test_grid_index_order_is_cartesian(self, scenario_a):
        grid = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A)
        first, second = grid.points[0].scenario, grid.points[1].scenario
        assert (first.k_manip, first.p_detected, first.penalty_factor) == (5e4, 0.05, 5)
        assert (second.k_manip, second.p_detected, second.penalty_factor) == (5e4, 0.05, 10)

    def test_single_point_equals_threshold(self, scenario_a):
        grid = CostBenefitService.sweep_thresholds(scenario_a, {})
        assert len(grid) == 1
        assert grid.points[0].result == CostBenefitService.leverage_threshold(scenario_a)

    def test_rows_sorted_by_cost_are_non_decreasing(self, scenario_a):
        frame = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A).to_frame()
        for _, group in frame.groupby(['p_det', 'penalty']):
            ordered = group.sort_values('k')['l_star'].tolist()
            assert ordered == sorted(ordered)

    def test_large_electorate_exceeds_a_thousand(self):
        s = scenario(k_manip=1e8, capital=1e5, pi_yes=0.4, p_detected=0.4, penalty_factor=50)
        assert CostBenefitService.leverage_threshold(s).l_star == pytest.approx(1700)

    def test_invalid_grid_point_is_named(self, scenario_a):
        with pytest.raises(DegenerateProbability, match='grid point 1'):
            CostBenefitService.sweep_thresholds(scenario_a, {'pi_yes': [0.3, 1.0]})

    def test_unknown_axis(self, scenario_a):
        with pytest.raises(InvalidParameter):
            CostBenefitService.sweep_thresholds(scenario_a, {'leverage': [1, 2]})

    def test_parallel_matches_serial(self, scenario_a):
        serial = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A)
        parallel = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A, workers=2)
        assert parallel.l_star_values == serial.l_star_values

    def test_band_deviation(self, scenario_a):
        grid = CostBenefitService.sweep_thresholds(scenario_a, self.AXES_A)
        check = CostBenefitService.band_deviation(grid, (2, 20))
        assert check['computed_base'] == pytest.approx(30 / 7)
        assert check['low_within_order'] and check['high_within_order']


class TestLeverageCap:

    def test_cap_above_threshold(self, scenario_a):
        assert RentService.leverage_cap_check(scenario_a, 10)['profitable_within_cap']

    def test_cap_below_threshold(self, scenario_a):
        assert not RentService.leverage_cap_check(scenario_a, 3)['profitable_within_cap']
