"""
Agent roster and order models
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Optional

from eventperp.app.models.position import Side
from eventperp.app.utils.errors import InvalidParameter


class AgentKind(str, Enum):
    """Types of simulated participants"""
    LEVERAGED = 'leveraged'        # fixed side, pairs against a counterparty or the book
    INFORMED = 'informed'          # leveraged toward the eventual outcome
    NOISE = 'noise'                # seeded random marketable orders
    VOL_INJECTOR = 'vol_injector'  # alternating buy/sell legs that fully revert


@dataclass(frozen=True)
class AgentSpec:
    agent_id: str
    kind: AgentKind
    side: Optional[Side] = None
    notional: float = 0.0
    leverage: float = 1.0
    count: int = 1
    open_tick: int = 0
    counterparty: Optional[str] = None
    counterparty_leverage: float = 1.0
    quantity: float = 0.0
    activity: float = 1.0
    start_tick: int = 1
    ticks: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', AgentKind(self.kind))
        if self.side is not None:
            object.__setattr__(self, 'side', Side(self.side))
        if self.kind is AgentKind.LEVERAGED and self.side is None:
            raise InvalidParameter(f"agent {self.agent_id}: leveraged agents need a side")
        if self.kind in (AgentKind.LEVERAGED, AgentKind.INFORMED):
            if self.notional <= 0:
                raise InvalidParameter(f"agent {self.agent_id}: notional must be > 0")
            if self.leverage < 1 or self.counterparty_leverage < 1:
                raise InvalidParameter(f"agent {self.agent_id}: leverage must be >= 1")
            if self.count < 1:
                raise InvalidParameter(f"agent {self.agent_id}: count must be >= 1")
        if self.kind in (AgentKind.NOISE, AgentKind.VOL_INJECTOR) and self.quantity < 0:
            raise InvalidParameter(f"agent {self.agent_id}: quantity must be >= 0")
        if not 0.0 <= self.activity <= 1.0:
            raise InvalidParameter(f"agent {self.agent_id}: activity must lie in [0, 1]")

    @property
    def holds_positions(self) -> bool:
        return self.kind in (AgentKind.LEVERAGED, AgentKind.INFORMED)

    def position_side(self, outcome: int) -> Side:
        if self.kind is AgentKind.INFORMED:
            return Side.toward(outcome)
        return self.side

    def to_dict(self) -> Dict[str, Any]:
        return {
            'agent_id': self.agent_id,
            'kind': self.kind.value,
            'side': self.side.value if self.side else None,
            'notional': self.notional,
            'leverage': self.leverage,
            'count': self.count,
            'open_tick': self.open_tick,
            'counterparty': self.counterparty,
            'counterparty_leverage': self.counterparty_leverage,
            'quantity': self.quantity,
            'activity': self.activity,
            'start_tick': self.start_tick,
            'ticks': self.ticks,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'AgentSpec':
        side = data.get('side')
        return cls(
            agent_id=str(data['agent_id']),
            kind=data['kind'],
            side=Side(side) if side else None,
            notional=float(data.get('notional', 0.0)),
            leverage=float(data.get('leverage', 1.0)),
            count=int(data.get('count', 1)),
            open_tick=int(data.get('open_tick', 0)),
            counterparty=data.get('counterparty') or None,
            counterparty_leverage=float(data.get('counterparty_leverage', 1.0)),
            quantity=float(data.get('quantity', 0.0)),
            activity=float(data.get('activity', 1.0)),
            start_tick=int(data.get('start_tick', 1)),
            ticks=int(data.get('ticks', 0)),
        )


@dataclass(frozen=True)
class Order:
    """A marketable order walked through the ladder; direction +1 buys, -1 sells"""

    agent_id: str
    direction: int
    quantity: float

    def to_dict(self) -> Dict[str, Any]:
        return {'agent_id': self.agent_id, 'direction': self.direction, 'quantity': self.quantity}
