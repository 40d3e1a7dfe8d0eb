"""
Venue state machine: order flow, margin, liquidation, halt and settlement
"""
import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from eventperp.app.models import (
    CloseReason,
    DepthLadder,
    EventKind,
    HaltMode,
    IndexPath,
    LadderSweep,
    MarginEngine,
    MarketSpec,
    Order,
    Position,
    RunReport,
    Side,
    SpoofOrder,
    VenueState,
)
from eventperp.app.models.ladder import BPS
from eventperp.app.services.margin_service import MarginService
from eventperp.app.utils.errors import AlreadySettled, InvalidParameter, InvariantViolation, VenueSettled
from eventperp.config.settings import (
    CONSERVATION_TOLERANCE,
    IMPACT_PERSISTENCE,
    LIQUIDITY_PROVIDER_ID,
    POOL_FRACTION,
    SPOOF_REACTION_COEFFICIENT,
)

logger = logging.getLogger(__name__)

# An action runs inside a tick, after exogenous orders and before the margin pass
Action = Callable[['VenueService'], None]


class VenueService:
    """
    One event-linked perpetual driven by an exogenous index path.

    Every position is opened against a matched counterparty (another agent or
    the liquidity provider), and every forced close is taken over at the fill
    price, so long and short open interest stay equal throughout a run.
    """

    def __init__(
        self,
        spec: MarketSpec,
        engine: MarginEngine,
        path: IndexPath,
        ladder: Optional[DepthLadder] = None,
        impact_persistence: float = IMPACT_PERSISTENCE,
        pool_fraction: float = POOL_FRACTION,
    ):
        if path.resolution_time != spec.resolution_time:
            raise InvalidParameter(
                f"index path covers {path.resolution_time} ticks, market resolves at {spec.resolution_time}"
            )
        if path[-1] != float(spec.outcome):
            raise InvalidParameter("index path must end at the market outcome")

        self.spec = spec
        self.engine = engine
        self.ladder = ladder or DepthLadder()
        self.impact_persistence = impact_persistence
        self.pool_fraction = pool_fraction
        self.state = VenueState(path, self.ladder, engine.vol_window)
        self.halt_price: Optional[float] = None
        self.pre_resolution_index: Optional[float] = None
        self._base = path[0]
        self._cross_trader: Optional[str] = None
        self._cross_budget = 0.0

    # Positions

    def open_position(self, owner_id: str, side: Side, collateral: float, leverage: float,
                      entry_price: Optional[float] = None, margin_exempt: bool = False,
                      replaces: Optional[int] = None) -> Position:
        """Open one leg at `entry_price` (the current index by default)"""
        s = self.state
        if s.settled:
            raise VenueSettled("venue has settled")
        if collateral <= 0:
            raise InvalidParameter(f"position collateral must be > 0, got {collateral}")
        price = s.index if entry_price is None else min(1.0, max(0.0, entry_price))
        pos = Position(
            position_id=s.next_position_id,
            owner_id=owner_id,
            side=side,
            entry_price=price,
            collateral=collateral,
            leverage=leverage,
            opened_tick=s.tick,
            margin_exempt=margin_exempt,
            replaces=replaces,
        )
        s.positions[pos.position_id] = pos
        s.next_position_id += 1
        s.record(EventKind.OPEN, pos.position_id, pos.notional, owner_id,
                 {'side': pos.side.value, 'entry_price': pos.entry_price, 'leverage': pos.leverage})
        return pos

    def open_pair(self, owner_id: str, side: Side, notional: float, leverage: float,
                  counterparty_id: Optional[str] = None,
                  counterparty_leverage: float = 1.0) -> Tuple[Position, Position]:
        """
        Open a position and its matching opposite leg at the current index

        Without a counterparty the liquidity provider takes the other side,
        fully funded and margin-exempt.
        """
        if notional <= 0:
            raise InvalidParameter(f"notional must be > 0, got {notional}")
        side = Side(side)
        pos = self.open_position(owner_id, side, notional / leverage, leverage)
        if counterparty_id is None:
            other = self.open_position(LIQUIDITY_PROVIDER_ID, side.opposite, notional, 1.0, margin_exempt=True)
        else:
            other = self.open_position(counterparty_id, side.opposite,
                                       notional / counterparty_leverage, counterparty_leverage)
        return pos, other

    def fund_pool(self, fraction: Optional[float] = None) -> float:
        """Seed the insurance pool as a fraction of open interest (one side's notional)"""
        s = self.state
        fraction = self.pool_fraction if fraction is None else fraction
        open_interest = math.fsum(p.notional for p in s.open_positions() if p.side is Side.LONG)
        s.pool_initial = fraction * open_interest
        s.pool_balance = s.pool_initial
        logger.debug(f"Insurance pool funded with {s.pool_initial:.2f} against open interest {open_interest:.2f}")
        return s.pool_initial

    def enable_cross_trading(self, agent_id: str, budget: float):
        """Let `agent_id` absorb forced closes, up to `budget` of notional"""
        self._cross_trader = agent_id
        self._cross_budget = budget

    def disable_cross_trading(self):
        self._cross_trader = None
        self._cross_budget = 0.0

    def exit_positions(self, owner_id: str) -> int:
        """Close every open position of an owner at the index; the liquidity provider takes over"""
        closed = 0
        for pos in self.state.open_positions():
            if pos.owner_id != owner_id:
                continue
            self._exit(pos)
            closed += 1
        return closed

    def _exit(self, pos: Position):
        s = self.state
        price = s.index
        self._close(pos, price, CloseReason.EXIT)
        s.record(EventKind.EXIT, pos.position_id, pos.notional, pos.owner_id, {'price': price})
        self.open_position(LIQUIDITY_PROVIDER_ID, pos.side, pos.notional, 1.0,
                           entry_price=price, margin_exempt=True, replaces=pos.position_id)

    # Order flow

    def _apply_move(self, move: float):
        s = self.state
        s.displacement += move
        s.set_index(self._base + s.displacement)

    def _charge_impact(self, agent_id: str, cost: float):
        """Impact is paid to the liquidity provider, so it nets to zero across the ledger"""
        if cost == 0:
            return
        self.state.credit(agent_id, -cost)
        self.state.credit(LIQUIDITY_PROVIDER_ID, cost)

    def execute_order(self, order: Order) -> LadderSweep:
        """Walk a marketable order through the ladder and move the index"""
        s = self.state
        if order.direction not in (1, -1):
            raise InvalidParameter(f"order direction must be +1 or -1, got {order.direction}")
        sweep = self.ladder.sweep_quantity(s.index, order.quantity, order.direction)
        if not sweep.filled:
            logger.warning(
                f"Order from {order.agent_id} for {order.quantity} exhausted the ladder at tick {s.tick}; "
                f"filled {sweep.quantity}"
            )
        self._charge_impact(order.agent_id, sweep.cost)
        self._apply_move(sweep.move)
        s.record(EventKind.ORDER, None, sweep.quantity, order.agent_id,
                 {'direction': order.direction, 'move': sweep.move, 'cost': sweep.cost})
        return sweep

    def push_by_cost(self, agent_id: str, budget: float, direction: int) -> LadderSweep:
        """Spend an impact budget moving the index in `direction`"""
        sweep = self.ladder.sweep_cost(self.state.index, budget, direction)
        return self.apply_push(agent_id, sweep)

    def push_by_move(self, agent_id: str, move: float) -> LadderSweep:
        sweep = self.ladder.sweep_move(self.state.index, move)
        return self.apply_push(agent_id, sweep)

    def apply_push(self, agent_id: str, sweep: LadderSweep) -> LadderSweep:
        s = self.state
        if s.halted or s.settled:
            raise VenueSettled("cannot trade on a halted or settled venue")
        self._charge_impact(agent_id, sweep.cost)
        self._apply_move(sweep.move)
        s.record(EventKind.PUSH, None, sweep.cost, agent_id, sweep.to_dict())
        return sweep

    # Spoofing

    def place_spoof(self, agent_id: str, side: Side, offset_bps: float, quantity: float,
                    reaction_coefficient: Optional[float] = None) -> SpoofOrder:
        """
        Rest non-bona-fide quantity `offset_bps` from mid on `side`

        Quotes react by shifting the index toward the spoofed side by
        coefficient * quantity / side depth.
        """
        s = self.state
        if s.halted or s.settled:
            raise VenueSettled("cannot quote on a halted or settled venue")
        self.ladder.bucket_for_offset(offset_bps)
        if quantity < 0:
            raise InvalidParameter(f"spoof quantity must be >= 0, got {quantity}")
        coefficient = SPOOF_REACTION_COEFFICIENT if reaction_coefficient is None else reaction_coefficient

        direction = Side(side).sign
        price = s.index - direction * offset_bps * BPS
        depth = self.ladder.side_depth(s.index)
        shift = direction * coefficient * quantity / depth if depth > 0 else 0.0
        spoof = SpoofOrder(agent_id, direction, min(1.0, max(0.0, price)), quantity, shift, s.tick)
        s.spoofs.append(spoof)
        self._apply_move(shift)
        s.record(EventKind.SPOOF_PLACE, None, quantity, agent_id,
                 {'price': spoof.price, 'direction': direction, 'shift': shift})
        return spoof

    def withdraw_spoofs(self, agent_id: str) -> List[SpoofOrder]:
        """
        Pull an agent's resting spoofs

        Reverses whatever part of each quote shift has not decayed and unwinds
        the positions opened by spoof fills at the index. The agent's other
        positions stay open.
        """
        s = self.state
        withdrawn = [spoof for spoof in s.spoofs if spoof.agent_id == agent_id]
        s.spoofs = [spoof for spoof in s.spoofs if spoof.agent_id != agent_id]
        trading = not (s.halted or s.settled or s.tick >= s.resolution_time)
        for spoof in withdrawn:
            reversed_shift = 0.0
            if trading:
                reversed_shift = spoof.shift_after(s.tick - spoof.placed_tick, self.impact_persistence)
                self._apply_move(-reversed_shift)
            s.record(EventKind.SPOOF_WITHDRAW, None, spoof.remaining, agent_id,
                     {'price': spoof.price, 'filled': spoof.filled_quantity, 'shift_reversed': reversed_shift})
            if not trading:
                continue
            for position_id in spoof.fill_position_ids:
                pos = s.positions[position_id]
                if pos.is_open:
                    self._exit(pos)
        return withdrawn

    def _check_spoofs(self):
        s = self.state
        for spoof in s.spoofs:
            if spoof.remaining <= 0:
                continue
            crossed = s.index <= spoof.price if spoof.direction > 0 else s.index >= spoof.price
            if not crossed:
                continue
            quantity = spoof.remaining
            spoof.filled_quantity = spoof.quantity
            side = Side.LONG if spoof.direction > 0 else Side.SHORT
            pos = self.open_position(spoof.agent_id, side, quantity, 1.0,
                                     entry_price=spoof.price, margin_exempt=True)
            spoof.fill_position_ids.append(pos.position_id)
            self.open_position(LIQUIDITY_PROVIDER_ID, side.opposite, quantity, 1.0,
                               entry_price=spoof.price, margin_exempt=True)
            s.record(EventKind.SPOOF_FILL, pos.position_id, quantity, spoof.agent_id, {'price': spoof.price})
            logger.debug(f"Spoof from {spoof.agent_id} filled {quantity} at {spoof.price:.4f}")

    # Clock

    def step(self, orders: Iterable[Order] = (), actions: Iterable[Action] = ()) -> VenueState:
        """
        Advance one tick

        Order: index update from the path and decayed displacement; the halt
        or resolution tick if it is this one; exogenous orders; actions;
        spoof fills; margin pass with liquidations in position-id order.

        Raises:
            VenueSettled: venue already settled or past resolution
        """
        s = self.state
        if s.settled:
            raise VenueSettled("venue has settled")
        if s.tick >= s.resolution_time:
            raise VenueSettled(f"venue is at resolution (tick {s.tick}); settle it")

        previous = s.observed_index[-1]
        s.tick += 1
        s.displacement *= self.impact_persistence
        self._base = s.path[s.tick]

        if s.tick == s.resolution_time:
            self.pre_resolution_index = previous
            s.set_index(float(self.spec.outcome))
            s.observed_index.append(s.index)
            return s

        s.set_index(self._base + s.displacement)

        if s.halted:
            if orders or actions:
                logger.debug(f"Dropping order flow at tick {s.tick}; venue is halted")
            s.observed_index.append(s.index)
            return s

        if self.spec.has_halt and s.tick == self.spec.halt_tick:
            self._halt()
            s.observed_index.append(s.index)
            return s

        for order in orders:
            self.execute_order(order)
        for action in actions:
            action(self)
        self._check_spoofs()

        s.returns.append(s.index - previous)
        self._margin_pass()
        s.observed_index.append(s.index)
        return s

    def _margin_pass(self):
        s = self.state
        for pos in s.open_positions():
            if pos.margin_exempt or not pos.is_open:
                continue
            requirement = MarginService.breakdown(self.engine, pos, s)
            if pos.last_requirement is not None and requirement.total > pos.last_requirement:
                s.record(EventKind.MARGIN_RAISE, pos.position_id, requirement.total - pos.last_requirement,
                         pos.owner_id, {'requirement': requirement.total})
            pos.last_requirement = requirement.total
            pos.max_requirement = max(pos.max_requirement, requirement.total)

            equity = pos.equity(s.index)
            if equity < requirement.total:
                self._liquidate(pos, requirement, equity)

    def _liquidate(self, pos: Position, requirement, equity: float):
        """Force-close against the ladder; the close walks the book and moves the index"""
        s = self.state
        direction = -pos.side.sign
        mid = s.index
        sweep = self.ladder.sweep_quantity(mid, pos.notional, direction)
        if not sweep.filled:
            logger.warning(
                f"Liquidation of position {pos.position_id} exhausted the ladder at tick {s.tick}; "
                f"closing at the deepest price reached"
            )
            fill = mid + sweep.move
        elif sweep.quantity > 0:
            fill = mid + direction * sweep.cost / sweep.quantity
        else:
            fill = mid
        fill = min(1.0, max(0.0, fill))

        preempted = equity >= requirement.without_vol
        details = {
            'fill_price': fill,
            'equity': equity,
            'requirement_static': requirement.static,
            'requirement_without_vol': requirement.without_vol,
            'requirement_total': requirement.total,
            'vol_excess': requirement.vol_excess,
            'preempted': preempted,
        }
        s.record(EventKind.LIQUIDATION, pos.position_id, pos.notional, pos.owner_id, details)
        logger.debug(
            f"Liquidated position {pos.position_id} ({pos.owner_id}) at tick {s.tick}: "
            f"equity {equity:.2f} < requirement {requirement.total:.2f}, fill {fill:.4f}"
        )
        self._close(pos, fill, CloseReason.LIQUIDATION)
        self._apply_move(sweep.move)

        taker = LIQUIDITY_PROVIDER_ID
        if self._cross_trader is not None and pos.notional <= self._cross_budget:
            taker = self._cross_trader
            self._cross_budget -= pos.notional
            s.record(EventKind.CROSS_TRADE, pos.position_id, pos.notional, taker, {'fill_price': fill})
        self.open_position(taker, pos.side, pos.notional, 1.0, entry_price=fill,
                           margin_exempt=True, replaces=pos.position_id)

    def _halt(self):
        s = self.state
        s.halted = True
        self.halt_price = s.index
        s.record(EventKind.HALT, None, 0.0, None, {'mode': self.spec.halt_mode.value})
        logger.info(f"Trading halted at tick {s.tick}, index {s.index:.4f} ({self.spec.halt_mode.value})")
        if self.spec.halt_mode is not HaltMode.CLOSE_AT_INDEX:
            return
        for pos in s.open_positions():
            self._close(pos, s.index, CloseReason.HALT)
            s.record(EventKind.HALT_CLOSE, pos.position_id, pos.notional, pos.owner_id, {'price': s.index})
        s.spoofs = []

    # Clearing

    def _close(self, pos: Position, price: float, reason: CloseReason) -> Dict[str, float]:
        """
        Realize a position at `price`

        Winners are paid in full. A loser pays up to its collateral; the
        shortfall is bad debt, drawn from the pool and then left uncovered.
        """
        s = self.state
        pnl = pos.marked_pnl(price)
        if pnl >= 0:
            s.credit(pos.owner_id, pnl)
            pos.mark_closed(price, s.tick, reason, pnl)
            return {'pnl': pnl, 'shortfall': 0.0, 'pool_paid': 0.0, 'uncovered': 0.0}

        loss = -pnl
        paid = min(loss, pos.collateral)
        shortfall = loss - paid
        pool_paid = 0.0
        uncovered = 0.0
        s.credit(pos.owner_id, -paid)
        if shortfall > 0:
            s.bad_debt.append(shortfall)
            pool_paid = min(shortfall, s.pool_balance)
            s.pool_balance -= pool_paid
            uncovered = shortfall - pool_paid
            s.uncovered_bad_debt += uncovered
            s.record(EventKind.BAD_DEBT, pos.position_id, shortfall, pos.owner_id)
            if pool_paid > 0:
                s.record(EventKind.POOL_DRAW, pos.position_id, pool_paid, pos.owner_id,
                         {'pool_balance': s.pool_balance})
            if uncovered > 0:
                s.record(EventKind.UNCOVERED, pos.position_id, uncovered, pos.owner_id)
                logger.warning(f"Insurance pool exhausted: {uncovered:.2f} of bad debt left uncovered")
        pos.mark_closed(price, s.tick, reason, -paid, collateral_paid=paid, shortfall=shortfall,
                        pool_paid=pool_paid, uncovered=uncovered)
        return {'pnl': -paid, 'shortfall': shortfall, 'pool_paid': pool_paid, 'uncovered': uncovered}

    def settle(self) -> Dict[str, float]:
        """
        Close every open position at the outcome

        Raises:
            InvalidParameter: the clock has not reached resolution
            AlreadySettled: settle was already called
        """
        s = self.state
        if s.settled:
            raise AlreadySettled("venue has already settled")
        if s.tick != s.resolution_time:
            raise InvalidParameter(f"cannot settle at tick {s.tick}; resolution is at {s.resolution_time}")

        outcome = float(self.spec.outcome)
        totals = {'closed': 0, 'bad_debt': 0.0, 'pool_paid': 0.0, 'uncovered': 0.0}
        for pos in s.open_positions():
            result = self._close(pos, outcome, CloseReason.SETTLEMENT)
            s.record(EventKind.SETTLEMENT, pos.position_id, result['pnl'], pos.owner_id, {'price': outcome})
            totals['closed'] += 1
            totals['bad_debt'] += result['shortfall']
            totals['pool_paid'] += result['pool_paid']
            totals['uncovered'] += result['uncovered']
        s.spoofs = []
        s.settled = True
        logger.info(
            f"Settled {totals['closed']} positions at outcome {self.spec.outcome}: "
            f"bad debt {totals['bad_debt']:.2f}, uncovered {totals['uncovered']:.2f}"
        )
        return totals

    def run_to_resolution(self, orders_by_tick: Optional[Dict[int, List[Order]]] = None,
                          actions_by_tick: Optional[Dict[int, List[Action]]] = None) -> Dict[str, float]:
        orders_by_tick = orders_by_tick or {}
        actions_by_tick = actions_by_tick or {}
        while self.state.tick < self.state.resolution_time:
            tick = self.state.tick + 1
            self.step(orders_by_tick.get(tick, ()), actions_by_tick.get(tick, ()))
        return self.settle()

    # Reporting

    def ledger_residual(self) -> float:
        """sum(agent PnL) + pool delta - uncovered bad debt; zero when the ledger balances"""
        s = self.state
        flows = [value for agent_flows in s.agent_flows.values() for value in agent_flows]
        flows.extend([s.pool_balance, -s.pool_initial, -s.uncovered_bad_debt])
        return math.fsum(flows)

    def build_report(self, seed: int) -> RunReport:
        """
        Summarize a settled run

        Raises:
            InvariantViolation: the run is not settled or the ledger does not balance
        """
        s = self.state
        if not s.settled:
            raise InvariantViolation("cannot report on an unsettled venue")

        residual = self.ledger_residual()
        scale = max(1.0, math.fsum(p.notional for p in s.positions.values()))
        if abs(residual) > CONSERVATION_TOLERANCE * scale:
            raise InvariantViolation(f"ledger does not balance for seed {seed}: residual {residual!r}")

        liquidations = s.events_of(EventKind.LIQUIDATION)
        window_start = self.spec.final_window_start
        return RunReport(
            seed=seed,
            market=self.spec.to_dict(),
            engine=self.engine.to_dict(),
            path_digest=s.path.digest(),
            index_values=list(s.observed_index),
            liquidations_total=len(liquidations),
            liquidations_final_window=sum(1 for e in liquidations if e.tick >= window_start),
            final_window_start=window_start,
            bad_debt_total=math.fsum(s.bad_debt),
            pool_initial=s.pool_initial,
            pool_final=s.pool_balance,
            uncovered_bad_debt=s.uncovered_bad_debt,
            agent_pnl=s.agent_pnl(),
            ledger_residual=residual,
            halt_price=self.halt_price,
            pre_resolution_index=self.pre_resolution_index,
            positions=[pos.to_dict() for pos in s.positions.values()],
            events=list(s.events),
        )
