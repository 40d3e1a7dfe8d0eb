"""
Venue event log model for tracking everything that happens during a run
"""
from typing import Optional, Dict, Any
from enum import Enum

EVENT_LOG_COLUMNS = ['tick', 'index', 'kind', 'position_id', 'agent_id', 'amount', 'message']


class EventKind(str, Enum):
    """Types of venue events"""
    # Positions
    OPEN = 'open'
    EXIT = 'exit'

    # Order flow
    ORDER = 'order'
    PUSH = 'push'

    # Margin
    MARGIN_RAISE = 'margin_raise'
    LIQUIDATION = 'liquidation'
    CROSS_TRADE = 'cross_trade'

    # Resolution
    HALT = 'halt'
    HALT_CLOSE = 'halt_close'
    SETTLEMENT = 'settlement'

    # Insurance pool
    BAD_DEBT = 'bad_debt'
    POOL_DRAW = 'pool_draw'
    UNCOVERED = 'uncovered'

    # Spoofing
    SPOOF_PLACE = 'spoof_place'
    SPOOF_FILL = 'spoof_fill'
    SPOOF_WITHDRAW = 'spoof_withdraw'


class VenueEvent:
    """One entry of the per-tick event log"""

    def __init__(
        self,
        tick: int,
        index: float,
        kind: EventKind,
        position_id: Optional[int] = None,
        amount: float = 0.0,
        agent_id: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        **kwargs
    ):
        self.tick = tick
        self.index = index
        self.kind = EventKind(kind) if isinstance(kind, str) else kind
        self.position_id = position_id
        self.amount = amount
        self.agent_id = agent_id
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tick': self.tick,
            'index': self.index,
            'kind': self.kind.value,
            'position_id': self.position_id,
            'amount': self.amount,
            'agent_id': self.agent_id,
            'details': self.details,
        }

    def to_row(self) -> Dict[str, Any]:
        """Flat row for the CSV event log"""
        return {
            'tick': self.tick,
            'index': self.index,
            'kind': self.kind.value,
            'position_id': self.position_id,
            'agent_id': self.agent_id,
            'amount': self.amount,
            'message': self.get_display_message(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'VenueEvent':
        return cls(**data)

    def get_display_message(self) -> str:
        """Get human-readable description of the event"""
        who = self.agent_id or 'venue'
        event_messages = {
            EventKind.OPEN: f"{who} opened position {self.position_id} ({self.amount:.2f} notional)",
            EventKind.EXIT: f"{who} exited position {self.position_id} at {self.index:.4f}",
            EventKind.ORDER: f"{who} traded {self.amount:.2f} contracts",
            EventKind.PUSH: f"{who} pushed the index, paying {self.amount:.2f} impact",
            EventKind.MARGIN_RAISE: f"requirement on position {self.position_id} rose to {self.amount:.2f}",
            EventKind.LIQUIDATION: f"position {self.position_id} of {who} liquidated ({self.amount:.2f} notional)",
            EventKind.CROSS_TRADE: f"{who} absorbed {self.amount:.2f} of forced flow from position {self.position_id}",
            EventKind.HALT: f"venue halted at index {self.index:.4f}",
            EventKind.HALT_CLOSE: f"position {self.position_id} closed at halt price {self.index:.4f}",
            EventKind.SETTLEMENT: f"position {self.position_id} settled at {self.index:.0f}",
            EventKind.BAD_DEBT: f"position {self.position_id} left {self.amount:.2f} bad debt",
            EventKind.POOL_DRAW: f"insurance pool paid {self.amount:.2f} for position {self.position_id}",
            EventKind.UNCOVERED: f"{self.amount:.2f} of bad debt exceeded the insurance pool",
            EventKind.SPOOF_PLACE: f"{who} placed {self.amount:.2f} spoof contracts",
            EventKind.SPOOF_FILL: f"{who} had {self.amount:.2f} spoof contracts filled",
            EventKind.SPOOF_WITHDRAW: f"{who} withdrew {self.amount:.2f} spoof contracts",
        }

        return event_messages.get(self.kind, f"{who} {self.kind.value} {self.amount}")
