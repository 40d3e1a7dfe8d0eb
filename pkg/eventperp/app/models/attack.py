"""
Adversary parameters and attack report models
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional

from eventperp.app.models.channel import ManipulationChannel
from eventperp.app.models.position import Side
from eventperp.app.utils.errors import InvalidParameter


@dataclass
class AttackReport:
    """Outcome of one adversary strategy.

    manipulator_pnl is gross of manipulation_cost; profitable means the net is
    strictly positive.
    """

    channel: ManipulationChannel
    manipulator_pnl: float = 0.0
    manipulation_cost: float = 0.0
    counterparty_losses: float = 0.0
    pool_drawdown: float = 0.0
    preempted_positions: int = 0
    spoof_placements: int = 0
    spoof_withdrawals: int = 0
    spoof_fills: int = 0
    forced_close_volume: float = 0.0
    achieved_move: float = 0.0
    channel_absent: bool = False
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def net_pnl(self) -> float:
        return self.manipulator_pnl - self.manipulation_cost

    @property
    def profitable(self) -> bool:
        return self.net_pnl > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'channel': self.channel.value,
            'manipulator_pnl': self.manipulator_pnl,
            'manipulation_cost': self.manipulation_cost,
            'net_pnl': self.net_pnl,
            'profitable': self.profitable,
            'counterparty_losses': self.counterparty_losses,
            'pool_drawdown': self.pool_drawdown,
            'preempted_positions': self.preempted_positions,
            'spoof_placements': self.spoof_placements,
            'spoof_withdrawals': self.spoof_withdrawals,
            'spoof_fills': self.spoof_fills,
            'forced_close_volume': self.forced_close_volume,
            'achieved_move': self.achieved_move,
            'channel_absent': self.channel_absent,
            'seed': self.seed,
            'details': dict(self.details),
        }


@dataclass(frozen=True)
class PreemptionParams:
    """Oscillating injection legs of `injection_quantity` from `injection_start`"""

    injection_quantity: float
    injection_start: int
    injection_ticks: int
    cross_trade_budget: float
    exit_delay: int = 5
    attacker_id: str = 'attacker'

    def __post_init__(self):
        if self.injection_quantity < 0 or self.cross_trade_budget < 0:
            raise InvalidParameter("injection quantity and cross-trade budget must be >= 0")
        if self.injection_start < 1 or self.injection_ticks < 0 or self.exit_delay < 0:
            raise InvalidParameter("injection timing must be non-negative and start after tick 0")

    @property
    def injection_end(self) -> int:
        return self.injection_start + self.injection_ticks

    def to_dict(self) -> Dict[str, Any]:
        return {
            'injection_quantity': self.injection_quantity,
            'injection_start': self.injection_start,
            'injection_ticks': self.injection_ticks,
            'cross_trade_budget': self.cross_trade_budget,
            'exit_delay': self.exit_delay,
            'attacker_id': self.attacker_id,
        }


@dataclass(frozen=True)
class HaltArbitrageParams:
    """Position held into the halt plus a push spread over the last `push_window` ticks"""

    push_budget: float
    push_window: int
    position_notional: float
    position_side: Side = Side.LONG
    position_leverage: float = 2.0
    counterparty_leverage: float = 2.0
    push_direction: Optional[int] = None
    attacker_id: str = 'attacker'
    counterparty_id: str = 'counterparty'

    def __post_init__(self):
        object.__setattr__(self, 'position_side', Side(self.position_side))
        if self.push_budget < 0:
            raise InvalidParameter("push budget must be >= 0")
        if self.push_window < 1:
            raise InvalidParameter("push window must cover at least one tick")
        if self.position_notional <= 0:
            raise InvalidParameter("position notional must be > 0")
        if self.push_direction not in (None, 1, -1):
            raise InvalidParameter("push direction must be +1 or -1")

    @property
    def direction(self) -> int:
        if self.push_direction is not None:
            return self.push_direction
        return self.position_side.sign

    def to_dict(self) -> Dict[str, Any]:
        return {
            'push_budget': self.push_budget,
            'push_window': self.push_window,
            'position_notional': self.position_notional,
            'position_side': self.position_side.value,
            'position_leverage': self.position_leverage,
            'counterparty_leverage': self.counterparty_leverage,
            'push_direction': self.direction,
            'attacker_id': self.attacker_id,
            'counterparty_id': self.counterparty_id,
        }


@dataclass(frozen=True)
class BadDebtShiftParams:
    """Directional position sized against a thinly collateralized counterparty"""

    notional: float
    manipulator_leverage: float
    counterparty_leverage: float
    believed_probability: float
    attacker_id: str = 'attacker'
    counterparty_id: str = 'counterparty'

    def __post_init__(self):
        if self.notional <= 0:
            raise InvalidParameter("notional must be > 0")
        if self.manipulator_leverage < 1 or self.counterparty_leverage < 1:
            raise InvalidParameter("leverage must be >= 1")
        if not 0.0 <= self.believed_probability <= 1.0:
            raise InvalidParameter("believed probability must lie in [0, 1]")

    @property
    def side(self) -> Side:
        """Direction toward the believed outcome"""
        return Side.LONG if self.believed_probability >= 0.5 else Side.SHORT

    def to_dict(self) -> Dict[str, Any]:
        return {
            'notional': self.notional,
            'manipulator_leverage': self.manipulator_leverage,
            'counterparty_leverage': self.counterparty_leverage,
            'believed_probability': self.believed_probability,
            'attacker_id': self.attacker_id,
            'counterparty_id': self.counterparty_id,
        }


@dataclass(frozen=True)
class TradePushParams:
    """Marketable push of `target_move` at `tick`, capped by `budget`"""

    target_move: float
    budget: float
    tick: int = 1
    attacker_id: str = 'attacker'

    def __post_init__(self):
        if self.budget < 0:
            raise InvalidParameter("push budget must be >= 0")
        if self.tick < 1:
            raise InvalidParameter("push tick must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return {'target_move': self.target_move, 'budget': self.budget, 'tick': self.tick,
                'attacker_id': self.attacker_id}


@dataclass(frozen=True)
class SpoofParams:
    """Resting quantity `offset_bps` away from mid on `side`, held `dwell_ticks`"""

    side: Side
    offset_bps: float
    quantity: float
    dwell_ticks: int
    tick: int = 1
    reaction_coefficient: Optional[float] = None
    attacker_id: str = 'attacker'

    def __post_init__(self):
        object.__setattr__(self, 'side', Side(self.side))
        if self.quantity < 0 or self.dwell_ticks < 0:
            raise InvalidParameter("spoof quantity and dwell must be >= 0")
        if self.tick < 1:
            raise InvalidParameter("spoof tick must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return {'side': self.side.value, 'offset_bps': self.offset_bps, 'quantity': self.quantity,
                'dwell_ticks': self.dwell_ticks, 'tick': self.tick,
                'reaction_coefficient': self.reaction_coefficient, 'attacker_id': self.attacker_id}


def params_from_dict(channel: str, data: Mapping[str, Any]):
    """Build the parameter object for an attack block"""
    if channel == 'preemption':
        return PreemptionParams(
            injection_quantity=float(data['injection_quantity']),
            injection_start=int(data['injection_start']),
            injection_ticks=int(data['injection_ticks']),
            cross_trade_budget=float(data.get('cross_trade_budget', 0.0)),
            exit_delay=int(data.get('exit_delay', 5)),
        )
    if channel == 'halt_arbitrage':
        direction = data.get('push_direction')
        return HaltArbitrageParams(
            push_budget=float(data['push_budget']),
            push_window=int(data['push_window']),
            position_notional=float(data['position_notional']),
            position_side=data.get('position_side', Side.LONG.value),
            position_leverage=float(data.get('position_leverage', 2.0)),
            counterparty_leverage=float(data.get('counterparty_leverage', 2.0)),
            push_direction=int(direction) if direction not in (None, '') else None,
        )
    if channel == 'bad_debt_shift':
        return BadDebtShiftParams(
            notional=float(data['notional']),
            manipulator_leverage=float(data['manipulator_leverage']),
            counterparty_leverage=float(data['counterparty_leverage']),
            believed_probability=float(data['believed_probability']),
        )
    if channel == 'trade_push':
        return TradePushParams(
            target_move=float(data['target_move']),
            budget=float(data['budget']),
            tick=int(data.get('tick', 1)),
        )
    if channel == 'spoof':
        coefficient = data.get('reaction_coefficient')
        return SpoofParams(
            side=data.get('side', Side.LONG.value),
            offset_bps=float(data['offset_bps']),
            quantity=float(data['quantity']),
            dwell_ticks=int(data.get('dwell_ticks', 0)),
            tick=int(data.get('tick', 1)),
            reaction_coefficient=float(coefficient) if coefficient not in (None, '') else None,
        )
    raise InvalidParameter(f"unknown attack channel {channel!r}")
