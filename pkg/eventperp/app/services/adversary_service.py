"""
Adversary strategies and paired-seed attack runs
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

from eventperp.app.models import (
    AttackReport,
    BadDebtShiftParams,
    EventKind,
    HaltArbitrageParams,
    HaltMode,
    ManipulationChannel,
    Position,
    PreemptionParams,
    RunConfig,
    RunReport,
    Side,
    SpoofParams,
    TradePushParams,
)
from eventperp.app.services.agent_service import injection_legs
from eventperp.app.services.simulation_service import SimulationService, Strategy
from eventperp.app.services.venue_service import Action, VenueService
from eventperp.app.utils.errors import InsufficientDepth, InvalidParameter, VenueSettled
from eventperp.config.settings import LIQUIDITY_PROVIDER_ID

logger = logging.getLogger(__name__)


def _agent_pnl(venue: VenueService, agent_id: str) -> float:
    return math.fsum(venue.state.agent_flows.get(agent_id, []))


class TradePushStrategy(Strategy):
    def __init__(self, params: TradePushParams):
        self.params = params
        self.report: Optional[AttackReport] = None

    def actions_for(self, tick: int) -> List[Action]:
        if tick != self.params.tick:
            return []

        def push(venue: VenueService):
            try:
                self.report = AdversaryService.trade_based_push(
                    venue, self.params.target_move, self.params.budget, self.params.attacker_id
                )
            except InsufficientDepth as e:
                logger.warning(f"Trade push stopped short at tick {tick}: {e.message}")
                self.report = e.partial
        return [push]


class SpoofStrategy(Strategy):
    def __init__(self, params: SpoofParams):
        self.params = params
        self.withdraw_tick = params.tick + params.dwell_ticks
        self.shift = 0.0

    def actions_for(self, tick: int) -> List[Action]:
        actions: List[Action] = []
        if tick == self.params.tick:
            def place(venue: VenueService):
                spoof = venue.place_spoof(self.params.attacker_id, self.params.side, self.params.offset_bps,
                                          self.params.quantity, self.params.reaction_coefficient)
                self.shift = spoof.shift
            actions.append(place)
        if tick == self.withdraw_tick:
            actions.append(lambda venue: venue.withdraw_spoofs(self.params.attacker_id))
        return actions


class PreemptionStrategy(Strategy):
    """Oscillating injection legs, then cross-trading against forced flow until exit"""

    def __init__(self, params: PreemptionParams, last_trading_tick: int):
        self.params = params
        self.legs = dict(injection_legs(params.attacker_id, params.injection_quantity,
                                        params.injection_start, params.injection_ticks, last_trading_tick))
        self.exit_tick = params.injection_end + params.exit_delay
        self.injection_cost = 0.0
        self.roster_max_id = 0

    def prepare(self, venue: VenueService):
        self.roster_max_id = venue.state.next_position_id - 1

    def actions_for(self, tick: int) -> List[Action]:
        p = self.params
        actions: List[Action] = []
        if tick == p.injection_start:
            actions.append(lambda venue: venue.enable_cross_trading(p.attacker_id, p.cross_trade_budget))
        if tick in self.legs:
            order = self.legs[tick]

            def inject(venue: VenueService):
                self.injection_cost += venue.execute_order(order).cost
            actions.append(inject)
        if tick == self.exit_tick:
            def leave(venue: VenueService):
                venue.disable_cross_trading()
                venue.exit_positions(p.attacker_id)
            actions.append(leave)
        return actions


class PositionStrategy(Strategy):
    """Opens the manipulator's position against a named counterparty at tick 0, then optionally pushes"""

    def __init__(self, attacker_id: str, side: Side, notional: float, leverage: float,
                 counterparty_id: str, counterparty_leverage: float,
                 push_ticks: Tuple[int, ...] = (), push_budget: float = 0.0, push_direction: int = 1):
        self.attacker_id = attacker_id
        self.side = side
        self.notional = notional
        self.leverage = leverage
        self.counterparty_id = counterparty_id
        self.counterparty_leverage = counterparty_leverage
        self.push_ticks = push_ticks
        self.push_budget = push_budget
        self.push_direction = push_direction
        self.push_cost = 0.0
        self.position: Optional[Position] = None
        self.counterparty_position: Optional[Position] = None

    def prepare(self, venue: VenueService):
        self.position, self.counterparty_position = venue.open_pair(
            self.attacker_id, self.side, self.notional, self.leverage,
            counterparty_id=self.counterparty_id, counterparty_leverage=self.counterparty_leverage,
        )

    def actions_for(self, tick: int) -> List[Action]:
        if tick not in self.push_ticks or self.push_budget <= 0:
            return []
        per_tick = self.push_budget / len(self.push_ticks)

        def push(venue: VenueService):
            self.push_cost += venue.push_by_cost(self.attacker_id, per_tick, self.push_direction).cost
        return [push]


class AdversaryService:
    """Market-price primitives and the three framework channels, each against a same-seed replay"""

    @staticmethod
    def trade_based_push(venue: VenueService, target_move: float, budget: float,
                         agent_id: str = 'attacker') -> AttackReport:
        """
        Push the index by `target_move` with marketable orders, spending at most `budget` on impact

        Raises:
            VenueSettled: venue halted or settled
            InsufficientDepth: the target lies beyond the ladder; the push that the
                ladder and budget allow is executed and carried as the partial report
        """
        s = venue.state
        if s.halted or s.settled:
            raise VenueSettled("cannot push a halted or settled venue")
        if budget < 0:
            raise InvalidParameter(f"push budget must be >= 0, got {budget}")

        report = AttackReport(channel=ManipulationChannel.TRADE_BASED)
        if target_move == 0 or budget == 0:
            return report

        needed = venue.ladder.sweep_move(s.index, target_move)
        direction = 1 if target_move > 0 else -1
        sweep = needed if needed.cost <= budget else venue.ladder.sweep_cost(s.index, budget, direction)

        venue.apply_push(agent_id, sweep)
        report.manipulation_cost = sweep.cost
        report.achieved_move = sweep.move
        report.details = {
            'target_move': target_move,
            'quantity': sweep.quantity,
            'cost_per_bp': sweep.cost_per_bp,
            'boundary': sweep.boundary,
            'reached_target': sweep is needed and needed.filled,
            'executed': True,
        }
        if not needed.filled:
            raise InsufficientDepth(
                f"target move {target_move} exceeds the ladder's {venue.ladder.max_move} per-side range; "
                f"pushed {sweep.move:.6f}",
                partial=report,
            )
        return report

    @staticmethod
    def spoof_and_withdraw(venue: VenueService, side: Side, offset_bps: float, quantity: float,
                           dwell_ticks: int, reaction_coefficient: Optional[float] = None,
                           agent_id: str = 'attacker', orders_by_tick=None) -> AttackReport:
        """
        Rest a spoof, hold it `dwell_ticks` (advancing the venue), then withdraw

        manipulation_cost is the carry on any fills unwound at the index.
        """
        if dwell_ticks < 0:
            raise InvalidParameter(f"dwell_ticks must be >= 0, got {dwell_ticks}")
        orders_by_tick = orders_by_tick or {}
        s = venue.state
        pnl_before = _agent_pnl(venue, agent_id)
        spoof = venue.place_spoof(agent_id, side, offset_bps, quantity, reaction_coefficient)

        for _ in range(dwell_ticks):
            if s.tick + 1 >= s.resolution_time or s.halted:
                break
            venue.step(orders_by_tick.get(s.tick + 1, ()))

        filled = spoof.filled_quantity
        venue.withdraw_spoofs(agent_id)
        pnl = _agent_pnl(venue, agent_id) - pnl_before
        return AttackReport(
            channel=ManipulationChannel.SPOOF_WITHDRAW,
            manipulator_pnl=max(pnl, 0.0),
            manipulation_cost=max(-pnl, 0.0),
            spoof_placements=1,
            spoof_withdrawals=1,
            spoof_fills=1 if filled > 0 else 0,
            achieved_move=spoof.shift,
            details={'price': spoof.price, 'filled_quantity': filled, 'dwell_ticks': dwell_ticks},
        )

    @staticmethod
    def run_preemption_attack(config: RunConfig, params: PreemptionParams, seed: int) -> AttackReport:
        report, _ = AdversaryService._preemption(config, params, seed)
        return report

    @staticmethod
    def _preemption(config: RunConfig, params: PreemptionParams, seed: int) -> Tuple[AttackReport, RunReport]:
        strategy = PreemptionStrategy(params, config.market.resolution_time - 1)
        attacked, _ = SimulationService.run_venue(config, seed, strategy)
        baseline = SimulationService.run_market(config, seed)

        influence_end = params.injection_end + config.engine.vol_window
        baseline_liquidated: Dict[int, int] = {
            e.position_id: e.tick for e in baseline.events if e.kind is EventKind.LIQUIDATION
        }
        preempted = 0
        forced_volume = 0.0
        for event in attacked.events:
            if event.kind is not EventKind.LIQUIDATION:
                continue
            if not params.injection_start <= event.tick <= influence_end:
                continue
            forced_volume += event.amount
            if event.position_id > strategy.roster_max_id or not event.details.get('preempted'):
                continue
            baseline_tick = baseline_liquidated.get(event.position_id)
            if baseline_tick is None or baseline_tick > event.tick:
                preempted += 1

        attacker = params.attacker_id
        report = AttackReport(
            channel=ManipulationChannel.PRE_EMPTION,
            manipulator_pnl=attacked.pnl_of(attacker) + strategy.injection_cost,
            manipulation_cost=strategy.injection_cost,
            counterparty_losses=_victim_losses(attacked, baseline, attacker),
            pool_drawdown=attacked.pool_drawdown - baseline.pool_drawdown,
            preempted_positions=preempted,
            forced_close_volume=forced_volume,
            channel_absent=not config.engine.is_dynamic,
            seed=seed,
            details={
                'cross_trades': attacked.count(EventKind.CROSS_TRADE, attacker),
                'liquidations': attacked.liquidations_total,
                'baseline_liquidations': baseline.liquidations_total,
            },
        )
        if report.channel_absent:
            logger.info(f"Pre-emption seed {seed}: channel absent under the static engine")
        return report, attacked

    @staticmethod
    def run_halt_arbitrage(config: RunConfig, params: HaltArbitrageParams, seed: int) -> AttackReport:
        report, _ = AdversaryService._halt_arbitrage(config, params, seed)
        return report

    @staticmethod
    def _halt_arbitrage(config: RunConfig, params: HaltArbitrageParams,
                        seed: int) -> Tuple[AttackReport, RunReport]:
        spec = config.market

        def strategy(budget: float) -> PositionStrategy:
            first = max(1, spec.halt_tick - params.push_window)
            return PositionStrategy(
                params.attacker_id, params.position_side, params.position_notional, params.position_leverage,
                params.counterparty_id, params.counterparty_leverage,
                push_ticks=tuple(range(first, spec.halt_tick)), push_budget=budget,
                push_direction=params.direction,
            )

        baseline = SimulationService.run_market(config, seed, strategy(0.0))
        if not spec.has_halt or spec.halt_mode is not HaltMode.CLOSE_AT_INDEX:
            reason = 'no halt' if not spec.has_halt else f"halt mode {spec.halt_mode.value}"
            logger.info(f"Halt arbitrage seed {seed}: channel absent ({reason})")
            return AttackReport(channel=ManipulationChannel.HALT_ARBITRAGE, channel_absent=True, seed=seed,
                                details={'reason': reason}), baseline

        pushing = strategy(params.push_budget)
        attacked, _ = SimulationService.run_venue(config, seed, pushing)

        attacker = params.attacker_id
        report = AttackReport(
            channel=ManipulationChannel.HALT_ARBITRAGE,
            manipulator_pnl=attacked.pnl_of(attacker) + pushing.push_cost - baseline.pnl_of(attacker),
            manipulation_cost=pushing.push_cost,
            counterparty_losses=baseline.pnl_of(params.counterparty_id) - attacked.pnl_of(params.counterparty_id),
            pool_drawdown=attacked.pool_drawdown - baseline.pool_drawdown,
            achieved_move=attacked.halt_price - baseline.halt_price,
            seed=seed,
            details={
                'manipulated_close': attacked.halt_price,
                'counterfactual_close': baseline.halt_price,
                'push_ticks': list(pushing.push_ticks),
            },
        )
        logger.info(
            f"Halt arbitrage seed {seed}: close {attacked.halt_price:.4f} vs {baseline.halt_price:.4f}, "
            f"differential PnL {report.manipulator_pnl:.2f}, push cost {report.manipulation_cost:.2f}"
        )
        return report, attacked

    @staticmethod
    def run_bad_debt_shift(config: RunConfig, params: BadDebtShiftParams, seed: int) -> AttackReport:
        report, _ = AdversaryService._bad_debt_shift(config, params, seed)
        return report

    @staticmethod
    def _bad_debt_shift(config: RunConfig, params: BadDebtShiftParams,
                        seed: int) -> Tuple[AttackReport, RunReport]:
        """
        Decompose the manipulator's payout into counterparty collateral, pool and uncovered

        Opening at the index costs no impact, so the ledger itself is the
        counterfactual: the payout sources are read off the opposing chain of
        positions (the counterparty and whoever took its side over).
        """
        strategy = PositionStrategy(
            params.attacker_id, params.side, params.notional, params.manipulator_leverage,
            params.counterparty_id, params.counterparty_leverage,
        )
        run, venue = SimulationService.run_venue(config, seed, strategy)
        mine = strategy.position
        chain = _takeover_chain(venue, strategy.counterparty_position)

        gross = mine.realized_pnl if mine.close_reason is not None and mine.realized_pnl > 0 else 0.0
        counterparty_funded = math.fsum(p.collateral_paid for p in chain if p.owner_id == params.counterparty_id)
        liquidity_funded = math.fsum(p.collateral_paid for p in chain if p.owner_id != params.counterparty_id)
        chain_gains = math.fsum(p.realized_pnl for p in chain if p.realized_pnl > 0)
        pool_funded = math.fsum(p.pool_paid for p in chain)
        uncovered = math.fsum(p.uncovered for p in chain)

        entry = mine.entry_price
        belief = params.believed_probability
        if params.side is Side.LONG:
            expected = belief * mine.notional * (1.0 - entry) - (1.0 - belief) * min(mine.notional * entry, mine.collateral)
        else:
            expected = (1.0 - belief) * mine.notional * entry - belief * min(mine.notional * (1.0 - entry), mine.collateral)

        report = AttackReport(
            channel=ManipulationChannel.BAD_DEBT_SHIFTING,
            manipulator_pnl=run.pnl_of(params.attacker_id),
            counterparty_losses=-run.pnl_of(params.counterparty_id),
            pool_drawdown=pool_funded + mine.pool_paid,
            seed=seed,
            details={
                'gross_payout': gross,
                'counterparty_funded': counterparty_funded,
                'liquidity_funded': liquidity_funded,
                'chain_gains': chain_gains,
                'pool_funded': pool_funded,
                'uncovered': uncovered,
                'pool_share': pool_funded / gross if gross > 0 else 0.0,
                'expected_pnl': expected,
                'size_to_counterparty_collateral': mine.notional / strategy.counterparty_position.collateral,
                'entry_price': entry,
                'side': params.side.value,
            },
        )
        logger.info(
            f"Bad-debt shift seed {seed}: payout {gross:.2f} = counterparty {counterparty_funded:.2f} "
            f"+ pool {pool_funded:.2f} + uncovered {uncovered:.2f}"
        )
        return report, run

    @staticmethod
    def run_attack(config: RunConfig, seed: int) -> RunReport:
        """Run the config's attack block; the attack run's report carries the AttackReport"""
        channel = config.attack_channel
        params = config.attack_params
        if channel == 'preemption':
            attack, run = AdversaryService._preemption(config, params, seed)
        elif channel == 'halt_arbitrage':
            attack, run = AdversaryService._halt_arbitrage(config, params, seed)
        elif channel == 'bad_debt_shift':
            attack, run = AdversaryService._bad_debt_shift(config, params, seed)
        elif channel == 'trade_push':
            strategy = TradePushStrategy(params)
            run = SimulationService.run_market(config, seed, strategy)
            attack = strategy.report or AttackReport(channel=ManipulationChannel.TRADE_BASED)
        elif channel == 'spoof':
            strategy = SpoofStrategy(params)
            run = SimulationService.run_market(config, seed, strategy)
            attacker = params.attacker_id
            pnl = run.pnl_of(attacker)
            attack = AttackReport(
                channel=ManipulationChannel.SPOOF_WITHDRAW,
                manipulator_pnl=max(pnl, 0.0),
                manipulation_cost=max(-pnl, 0.0),
                spoof_placements=run.count(EventKind.SPOOF_PLACE, attacker),
                spoof_withdrawals=run.count(EventKind.SPOOF_WITHDRAW, attacker),
                spoof_fills=run.count(EventKind.SPOOF_FILL, attacker),
                achieved_move=strategy.shift,
            )
        else:
            raise InvalidParameter(f"unknown attack channel: {channel}")
        attack.seed = seed
        run.attack = attack
        return run


def _victim_losses(attacked: RunReport, baseline: RunReport, attacker_id: str) -> float:
    """Loss differential summed over every account except the attacker and the liquidity provider"""
    agents = (set(attacked.agent_pnl) | set(baseline.agent_pnl)) - {attacker_id, LIQUIDITY_PROVIDER_ID}
    return math.fsum(baseline.pnl_of(a) - attacked.pnl_of(a) for a in sorted(agents))


def _takeover_chain(venue: VenueService, head: Position) -> List[Position]:
    """A position plus every position that took it over, transitively"""
    chain = [head]
    ids = {head.position_id}
    for pos in venue.state.positions.values():
        if pos.replaces in ids:
            chain.append(pos)
            ids.add(pos.position_id)
    return chain
