"""
Tests for the adversary primitives and the margin/halt attack channels
"""
import math
from dataclasses import replace

import pytest

from eventperp.app.models import DepthLadder, EventKind, HaltMode, ManipulationChannel, Side
from eventperp.app.services import AdversaryService
from eventperp.app.utils.errors import InsufficientDepth, VenueSettled
from tests.conftest import flat_venue


def attack(config, seed=0):
    return AdversaryService.run_attack(config, seed).attack


def with_market(config, **changes):
    market = config.market.to_dict()
    market.update(changes)
    return config.with_market(type(config.market).from_dict(market))


# ============================================================
# TRADE-BASED PUSH
# ============================================================

class TestTradeBasedPush:

    def test_zero_target_costs_nothing(self):
        venue = flat_venue()
        report = AdversaryService.trade_based_push(venue, 0.0, budget=1e4)
        assert report.manipulation_cost == 0
        assert report.achieved_move == 0
        assert venue.state.index == 0.5

    def test_push_reaches_target_within_budget(self):
        venue = flat_venue()
        report = AdversaryService.trade_based_push(venue, 0.01, budget=1e6)
        assert report.achieved_move == pytest.approx(0.01)
        assert venue.state.index == pytest.approx(0.51)
        assert venue.state.agent_pnl()['attacker'] == pytest.approx(-report.manipulation_cost)

    def test_budget_caps_the_move(self):
        venue = flat_venue()
        full = flat_venue().ladder.sweep_move(0.5, 0.01).cost
        report = AdversaryService.trade_based_push(venue, 0.01, budget=full / 4)
        assert 0 < report.achieved_move < 0.01
        assert report.manipulation_cost == pytest.approx(full / 4)
        assert report.details['reached_target'] is False

    def test_boundary_push_costs_more_per_bp(self):
        ladder = DepthLadder(boundary_depth_ratio=1.7, boundary_band=0.1)
        mid = AdversaryService.trade_based_push(flat_venue(ladder=ladder), 0.01, budget=1e6)
        edge = AdversaryService.trade_based_push(flat_venue(level=0.05, ladder=ladder), 0.01, budget=1e6)
        assert edge.details['boundary'] and not mid.details['boundary']
        assert edge.details['cost_per_bp'] >= 1.7 * mid.details['cost_per_bp'] * (1 - 1e-12)

    def test_push_beyond_the_ladder(self):
        venue = flat_venue()
        with pytest.raises(InsufficientDepth) as excinfo:
            AdversaryService.trade_based_push(venue, 0.06, budget=1e9)
        partial = excinfo.value.partial
        assert partial.achieved_move == pytest.approx(venue.ladder.max_move)
        assert partial.details['executed'] is True
        assert partial.details['reached_target'] is False
        assert venue.state.index == pytest.approx(0.5 + venue.ladder.max_move)
        assert venue.state.agent_pnl()['attacker'] == pytest.approx(-partial.manipulation_cost)

    def test_push_on_a_halted_venue(self):
        venue = flat_venue(resolution_time=10, halt_offset=3)
        for _ in range(7):
            venue.step()
        with pytest.raises(VenueSettled):
            AdversaryService.trade_based_push(venue, 0.01, budget=1e6)


# ============================================================
# SPOOF AND WITHDRAW
# ============================================================

class TestSpoofAndWithdraw:

    def test_zero_dwell_on_a_quiet_book(self):
        venue = flat_venue()
        report = AdversaryService.spoof_and_withdraw(venue, Side.LONG, 300, 1000, dwell_ticks=0,
                                                     reaction_coefficient=0.1)
        assert report.spoof_placements == report.spoof_withdrawals == 1
        assert report.spoof_fills == 0
        assert venue.state.tick == 0
        assert venue.state.index == pytest.approx(0.5)

    def test_no_reaction_leaves_the_index(self):
        venue = flat_venue()
        venue.place_spoof('spoofer', Side.LONG, 300, 1000, reaction_coefficient=0.0)
        assert venue.state.index == 0.5

    def test_reaction_shifts_toward_the_spoofed_side(self):
        venue = flat_venue()
        depth = venue.ladder.side_depth(0.5)
        spoof = venue.place_spoof('spoofer', Side.LONG, 300, 1000, reaction_coefficient=0.1)
        assert spoof.shift == pytest.approx(0.1 * 1000 / depth)
        assert venue.state.index == pytest.approx(0.5 + spoof.shift)

        offer = flat_venue().place_spoof('spoofer', Side.SHORT, 300, 1000, reaction_coefficient=0.1)
        assert offer.shift == pytest.approx(-spoof.shift)

    def test_withdraw_reverses_the_shift(self):
        venue = flat_venue()
        venue.place_spoof('spoofer', Side.LONG, 300, 1000, reaction_coefficient=0.1)
        venue.withdraw_spoofs('spoofer')
        assert venue.state.index == pytest.approx(0.5)
        assert venue.state.spoofs == []

    def test_crossed_spoof_fills_and_unwinds(self):
        """A resting bid 25bp below mid is hit when sellers push through it"""
        venue = flat_venue()
        venue.place_spoof('spoofer', Side.LONG, 25, 100, reaction_coefficient=0.0)
        venue.push_by_move('seller', -0.004)
        venue.step()
        assert venue.state.events_of(EventKind.SPOOF_FILL)
        venue.withdraw_spoofs('spoofer')
        assert not [p for p in venue.state.open_positions() if p.owner_id == 'spoofer']
        venue.run_to_resolution()
        assert venue.ledger_residual() == pytest.approx(0, abs=1e-9)

    def test_withdraw_keeps_the_agents_other_positions(self):
        venue = flat_venue()
        held, _ = venue.open_pair('spoofer', Side.LONG, 1000, 5)
        venue.place_spoof('spoofer', Side.LONG, 25, 100, reaction_coefficient=0.0)
        venue.push_by_move('seller', -0.004)
        venue.step()
        filled = venue.state.events_of(EventKind.SPOOF_FILL)[0].position_id
        venue.withdraw_spoofs('spoofer')
        assert held.is_open
        assert not venue.state.positions[filled].is_open
        assert [p.position_id for p in venue.state.open_positions() if p.owner_id == 'spoofer'] == [
            held.position_id
        ]

    def test_withdraw_reverses_only_the_undecayed_shift(self):
        venue = flat_venue()
        venue.impact_persistence = 0.5
        spoof = venue.place_spoof('spoofer', Side.LONG, 300, 1000, reaction_coefficient=0.1)
        venue.step()
        assert venue.state.index == pytest.approx(0.5 + spoof.shift / 2)
        venue.withdraw_spoofs('spoofer')
        assert venue.state.index == pytest.approx(0.5)
        withdrawal = venue.state.events_of(EventKind.SPOOF_WITHDRAW)[0]
        assert withdrawal.details['shift_reversed'] == pytest.approx(spoof.shift / 2)


# ============================================================
# PRE-EMPTION
# ============================================================

class TestPreemption:

    def test_dynamic_engine_preempts_marginal_positions(self, load_config):
        report = attack(load_config('preemption.cfg'))
        assert report.channel is ManipulationChannel.PRE_EMPTION
        assert not report.channel_absent
        assert report.preempted_positions == 4
        assert report.forced_close_volume == pytest.approx(2000)
        assert report.details['baseline_liquidations'] == 0

    def test_static_engine_has_no_channel(self, load_config):
        config = load_config('preemption.cfg')
        report = attack(config.with_engine(config.engine.as_kind('e0')))
        assert report.channel_absent
        assert report.preempted_positions == 0

    def test_vol_insensitive_engine(self, load_config):
        config = load_config('preemption.cfg')
        report = attack(config.with_engine(replace(config.engine, vol_coefficient=0.0)))
        assert report.preempted_positions == 0

    def test_injection_cost_is_counted(self, load_config):
        report = attack(load_config('preemption.cfg'))
        assert report.manipulation_cost > 0
        assert report.net_pnl == pytest.approx(report.manipulator_pnl - report.manipulation_cost)


# ============================================================
# HALT ARBITRAGE
# ============================================================

class TestHaltArbitrage:

    # three 10 USD pushes: 2.6875 clears the first 100bp, the rest goes into the 100-200bp bucket
    PUSH_MOVE = 3 * math.sqrt(0.01 ** 2 + 2 * (10 - 2.6875) / 1e5)

    def test_push_into_the_halt(self, load_config):
        report = attack(load_config('halt_arbitrage.cfg'))
        assert report.details['push_ticks'] == [22, 23, 24]
        assert report.achieved_move == pytest.approx(self.PUSH_MOVE, rel=1e-6)
        assert report.manipulator_pnl == pytest.approx(1000 * self.PUSH_MOVE, rel=1e-6)
        assert report.manipulation_cost == pytest.approx(30)
        assert report.net_pnl == pytest.approx(1000 * self.PUSH_MOVE - 30, rel=1e-6)
        assert report.profitable
        assert report.counterparty_losses == pytest.approx(report.manipulator_pnl)

    def test_manipulated_close_differs_from_counterfactual(self, load_config):
        report = attack(load_config('halt_arbitrage.cfg'))
        assert report.details['manipulated_close'] > report.details['counterfactual_close']

    def test_short_pushing_down_also_profits(self, load_config):
        config = load_config('halt_arbitrage.cfg')
        params = replace(config.attack_params, position_side=Side.SHORT)
        report = attack(replace(config, attack_params=params))
        assert report.achieved_move < 0
        assert report.manipulator_pnl > 0

    @pytest.mark.parametrize('side', [Side.LONG, Side.SHORT])
    def test_push_pays_across_seeds(self, load_config, side):
        config = replace(load_config('halt_arbitrage.cfg'), volatility=0.05)
        params = replace(config.attack_params, position_side=side)
        config = replace(config, attack_params=params)
        paying = 0
        for seed in range(100):
            report = attack(config, seed)
            expected_sign = params.direction * side.sign
            if report.manipulator_pnl != 0 and math.copysign(1, report.manipulator_pnl) == expected_sign:
                paying += 1
        assert paying >= 95

    def test_zero_budget(self, load_config):
        config = load_config('halt_arbitrage.cfg')
        report = attack(replace(config, attack_params=replace(config.attack_params, push_budget=0)))
        assert report.manipulator_pnl == 0
        assert report.achieved_move == 0

    def test_no_halt_no_channel(self, load_config):
        report = attack(with_market(load_config('halt_arbitrage.cfg'), halt_offset=0))
        assert report.channel_absent

    def test_freeze_mode_no_channel(self, load_config):
        report = attack(with_market(load_config('halt_arbitrage.cfg'),
                                    halt_mode=HaltMode.FREEZE_TO_ORACLE.value))
        assert report.channel_absent


# ============================================================
# BAD-DEBT SHIFTING
# ============================================================

class TestBadDebtShift:

    def test_pool_funds_the_jump_beyond_the_buffer(self, load_config):
        """50pp jump against a 20pp counterparty buffer"""
        report = attack(load_config('bad_debt_shift.cfg'))
        assert report.channel is ManipulationChannel.BAD_DEBT_SHIFTING
        assert report.details['gross_payout'] == pytest.approx(500)
        assert report.details['counterparty_funded'] == pytest.approx(200)
        assert report.details['pool_funded'] == pytest.approx(300)
        assert report.details['uncovered'] == pytest.approx(0)
        assert report.details['pool_share'] == pytest.approx(0.6)
        assert report.pool_drawdown == pytest.approx(300)
        assert report.manipulator_pnl == pytest.approx(500)

    def test_expected_pnl_under_belief(self, load_config):
        """0.8 * 500 - 0.2 * 200"""
        report = attack(load_config('bad_debt_shift.cfg'))
        assert report.details['expected_pnl'] == pytest.approx(360)

    def test_losing_branch_leaves_the_pool_alone(self, load_config):
        config = with_market(load_config('bad_debt_shift.cfg'), outcome=0)
        config = replace(config, attack_params=replace(config.attack_params, manipulator_leverage=2))
        report = attack(config)
        assert report.manipulator_pnl == pytest.approx(-500)
        assert report.pool_drawdown == 0
        assert report.details['gross_payout'] == 0

    def test_jump_within_buffer(self, load_config):
        config = load_config('bad_debt_shift.cfg')
        report = attack(replace(config, attack_params=replace(config.attack_params, counterparty_leverage=2)))
        assert report.details['pool_funded'] == 0
        assert report.details['counterparty_funded'] == pytest.approx(500)

    def test_size_to_counterparty_collateral(self, load_config):
        """1000 notional against 200 of counterparty collateral"""
        report = attack(load_config('bad_debt_shift.cfg'))
        assert report.details['size_to_counterparty_collateral'] == pytest.approx(5)

    @pytest.mark.parametrize('pool_fraction', [0.0, 0.5])
    def test_payout_sources_add_up(self, load_config, pool_fraction):
        """On a moving index the counterparty may be liquidated and taken over before the jump"""
        config = replace(load_config('bad_debt_shift.cfg'), volatility=0.15, pool_fraction=pool_fraction)
        winning = 0
        taken_over = 0
        for seed in range(100):
            details = attack(config, seed).details
            if details['gross_payout'] == 0:
                continue
            winning += 1
            taken_over += details['liquidity_funded'] > 0
            sources = (details['counterparty_funded'] + details['pool_funded'] + details['uncovered']
                       + details['liquidity_funded'] - details['chain_gains'])
            assert sources == pytest.approx(details['gross_payout'], abs=1e-9)
        assert winning > 0
        assert taken_over > 0
