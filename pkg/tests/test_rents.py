"""
Tests for leveraged informed-trading rents
"""
from dataclasses import replace

import numpy as np
import pytest

from eventperp.app.models import RentProfile
from eventperp.app.services import ConfigService, RentService, SimulationService
from eventperp.app.utils.errors import (
    ConfigError,
    DegenerateVolatility,
    InvalidParameter,
    MismatchedRuns,
    ZeroRent,
)
from tests.conftest import DATA_DIR


def profile(leverage=1.0, rent=0.05, sigma=0.2, detection_cost=1e3, capital=1e4):
    return RentProfile(
        unleveraged_rent_per_event=rent,
        return_volatility=sigma,
        detection_cost=detection_cost,
        capital=capital,
        leverage=leverage,
    )


class TestLeveragedRent:

    def test_ten_times(self):
        assert RentService.leveraged_rent(profile(leverage=10)) == pytest.approx(5e3)

    def test_unit_leverage_is_identity(self):
        assert RentService.leveraged_rent(profile()) == pytest.approx(0.05 * 1e4)

    @pytest.mark.parametrize('leverage', [1, 3, 50])
    def test_no_information_no_rent(self, leverage):
        assert RentService.leveraged_rent(profile(leverage=leverage, rent=0)) == 0

    def test_leverage_below_one_is_rejected(self):
        with pytest.raises(InvalidParameter):
            profile(leverage=0.5)


class TestSharpeRatio:

    @pytest.mark.parametrize('leverage', [1, 10, 50])
    def test_invariant_without_funding(self, leverage):
        assert RentService.sharpe_ratio(profile(leverage=leverage)) == pytest.approx(0.25)

    def test_funding_cost(self):
        """(0.5 - 0.1) / 2.0"""
        assert RentService.sharpe_ratio(profile(leverage=10), funding_cost_per_event=0.1) == pytest.approx(0.20)

    def test_zero_rent(self):
        assert RentService.sharpe_ratio(profile(leverage=7, rent=0)) == 0

    def test_zero_volatility(self):
        with pytest.raises(DegenerateVolatility):
            RentService.sharpe_ratio(profile(sigma=0))


class TestDetectionCostPerProfit:

    @pytest.mark.parametrize('leverage,expected', [(1, 2.0), (2, 1.0), (4, 0.5), (10, 0.2)])
    def test_falls_as_one_over_leverage(self, leverage, expected):
        assert RentService.detection_cost_per_profit(profile(leverage=leverage)) == pytest.approx(expected)

    def test_zero_detection_cost(self):
        assert RentService.detection_cost_per_profit(profile(detection_cost=0)) == 0

    def test_zero_rent(self):
        with pytest.raises(ZeroRent):
            RentService.detection_cost_per_profit(profile(rent=0))

    def test_detection_cost_is_not_leveraged(self):
        assert profile(leverage=10).detection_cost == profile().detection_cost


class TestRentCompressionCheck:

    @pytest.fixture
    def flat_market(self, load_config):
        return replace(load_config('market.cfg'), volatility=0.0)

    def run(self, config, kind, seed=3):
        return SimulationService.run_market(config.with_engine(config.engine.as_kind(kind)), seed)

    def test_identical_engines_give_identical_pnl(self, flat_market):
        report = RentService.rent_compression_check(
            self.run(flat_market, 'e0'), self.run(flat_market, 'e0'), 'insider'
        )
        assert report.dynamic.trader_pnl == report.static.trader_pnl
        assert report.dynamic.margin_calls == report.static.margin_calls

    def test_flat_path_gives_equal_margin_calls(self, flat_market):
        report = RentService.rent_compression_check(
            self.run(flat_market, 'e2'), self.run(flat_market, 'e0'), 'insider'
        )
        assert report.dynamic.margin_calls == report.static.margin_calls == 0

    def test_dynamic_engine_raises_requirements_at_least_as_often(self, load_config):
        config = load_config('market.cfg')
        report = RentService.rent_compression_check(self.run(config, 'e2'), self.run(config, 'e0'), 'insider')
        assert report.dynamic.margin_raises >= report.static.margin_raises
        assert report.dynamic.max_requirement >= report.static.max_requirement

    def test_mismatched_seeds(self, flat_market):
        with pytest.raises(MismatchedRuns):
            RentService.rent_compression_check(
                self.run(flat_market, 'e2', seed=1), self.run(flat_market, 'e0', seed=2), 'insider'
            )

    def test_unknown_trader(self, flat_market):
        with pytest.raises(InvalidParameter):
            RentService.rent_compression_check(
                self.run(flat_market, 'e2'), self.run(flat_market, 'e0'), 'nobody'
            )


def random_profiles(count, seed):
    rng = np.random.default_rng(seed)
    columns = zip(
        rng.uniform(1e-4, 0.2, count),
        rng.uniform(1e-3, 1.0, count),
        rng.uniform(0, 1e5, count),
        rng.uniform(1e2, 1e7, count),
        rng.uniform(1, 100, count),
    )
    for rent, sigma, detection_cost, capital, leverage in columns:
        base = profile(rent=float(rent), sigma=float(sigma), detection_cost=float(detection_cost),
                       capital=float(capital))
        yield base, base.at_leverage(float(leverage))


class TestRentLaws:

    def test_sharpe_ratio_ignores_leverage(self):
        for base, levered in random_profiles(1_000, seed=3):
            assert RentService.sharpe_ratio(levered) == pytest.approx(RentService.sharpe_ratio(base), rel=1e-12)

    def test_detection_cost_times_leverage_is_constant(self):
        for base, levered in random_profiles(1_000, seed=5):
            scaled = RentService.detection_cost_per_profit(levered) * levered.leverage
            assert scaled == pytest.approx(RentService.detection_cost_per_profit(base), rel=1e-12, abs=0)


class TestRentTable:

    def test_rows_per_leverage(self):
        rows = RentService.rent_table(profile(), [1, 2, 10], label='insider')
        assert [row['leverage'] for row in rows] == [1, 2, 10]
        assert [row['leveraged_rent'] for row in rows] == pytest.approx([500, 1000, 5000])
        assert all(row['sharpe_ratio'] == pytest.approx(0.25) for row in rows)
        assert [row['detection_cost_per_profit'] for row in rows] == pytest.approx([2.0, 1.0, 0.2])
        assert {row['label'] for row in rows} == {'insider'}

    def test_undefined_cells_are_none(self):
        rows = RentService.rent_table(profile(rent=0, sigma=0), [1, 5])
        assert all(row['sharpe_ratio'] is None for row in rows)
        assert all(row['detection_cost_per_profit'] is None for row in rows)

    def test_funding_cost_lowers_the_sharpe_ratio(self):
        row, = RentService.rent_table(profile(), [10], funding_cost_per_event=0.1)
        assert row['sharpe_ratio'] == pytest.approx(0.20)

    def test_no_leverages(self):
        with pytest.raises(InvalidParameter):
            RentService.rent_table(profile(), [])

    def test_leverage_below_one(self):
        with pytest.raises(InvalidParameter):
            RentService.rent_table(profile(), [0.5])


class TestRentProfiles:

    def test_bundled_profiles(self):
        entries = ConfigService.load_rent_profiles(DATA_DIR / 'rents.txt')
        assert [entry.label for entry in entries] == ['insider', 'timing']
        insider, timing = entries
        assert insider.profile.unleveraged_rent_per_event == 0.05
        assert insider.leverages == (1, 2, 5, 10, 20)
        assert timing.funding_cost_per_event == 0.002

    def test_other_block_kind(self):
        with pytest.raises(ConfigError) as excinfo:
            ConfigService.parse_rent_profiles("[market]\nresolution_time = 5\n")
        assert excinfo.value.line == 1

    def test_missing_capital(self):
        with pytest.raises(ConfigError):
            ConfigService.parse_rent_profiles("[rent a]\nrent_per_event = 0.1\nreturn_volatility = 0.2\n")


class TestCompareEngines:

    def test_matches_separate_runs(self, load_config):
        config = load_config('market.cfg')
        report = RentService.compare_engines(config, seed=3, trader_id='insider')
        dynamic = SimulationService.run_market(config.with_engine(config.engine.as_kind('e2')), 3)
        assert report.dynamic.trader_pnl == dynamic.pnl_of('insider')
