"""
Position model for the event-linked perpetual
"""
from enum import Enum
from typing import Any, Dict, Optional

from eventperp.app.models.units import Leverage, Money, Probability


class Side(str, Enum):
    LONG = 'long'
    SHORT = 'short'

    @property
    def sign(self) -> int:
        return 1 if self is Side.LONG else -1

    @property
    def opposite(self) -> 'Side':
        return Side.SHORT if self is Side.LONG else Side.LONG

    @classmethod
    def toward(cls, outcome: int) -> 'Side':
        """Side that profits if the event resolves to `outcome`"""
        return cls.LONG if outcome == 1 else cls.SHORT


class CloseReason(str, Enum):
    LIQUIDATION = 'liquidation'
    HALT = 'halt'
    SETTLEMENT = 'settlement'
    EXIT = 'exit'


class Position:
    """
    A leveraged position in YES contracts.

    notional is the contract count N (face value in USD); PnL per unit move of
    the index is N. notional = leverage * collateral exactly at open.
    """

    def __init__(
        self,
        position_id: int,
        owner_id: str,
        side: Side,
        entry_price: float,
        collateral: float,
        leverage: float,
        opened_tick: int = 0,
        margin_exempt: bool = False,
        replaces: Optional[int] = None,
        **kwargs
    ):
        self.position_id = position_id
        self.owner_id = owner_id
        self.side = Side(side)
        self.entry_price = Probability(entry_price).value
        self.collateral = Money(collateral).amount
        self.leverage = Leverage(leverage).value
        self.notional = self.leverage * self.collateral
        self.opened_tick = opened_tick
        self.margin_exempt = margin_exempt  # liquidity provider and fully funded takeovers
        self.replaces = replaces  # id of the liquidated or exited position this one took over

        self.is_open = True
        self.close_price: Optional[float] = None
        self.closed_tick: Optional[int] = None
        self.close_reason: Optional[CloseReason] = None
        self.realized_pnl = 0.0
        self.collateral_paid = 0.0
        self.shortfall = 0.0
        self.pool_paid = 0.0
        self.uncovered = 0.0
        self.last_requirement: Optional[float] = None
        self.max_requirement = 0.0

    def marked_pnl(self, price: float) -> float:
        return self.side.sign * self.notional * (price - self.entry_price)

    def equity(self, price: float) -> float:
        """Collateral plus PnL marked at `price`"""
        return self.collateral + self.marked_pnl(price)

    def mark_closed(self, price: float, tick: int, reason: CloseReason, realized_pnl: float,
                    collateral_paid: float = 0.0, shortfall: float = 0.0,
                    pool_paid: float = 0.0, uncovered: float = 0.0):
        self.is_open = False
        self.close_price = price
        self.closed_tick = tick
        self.close_reason = CloseReason(reason)
        self.realized_pnl = realized_pnl
        self.collateral_paid = collateral_paid
        self.shortfall = shortfall
        self.pool_paid = pool_paid
        self.uncovered = uncovered

    def to_dict(self) -> Dict[str, Any]:
        return {
            'position_id': self.position_id,
            'owner_id': self.owner_id,
            'side': self.side.value,
            'entry_price': self.entry_price,
            'notional': self.notional,
            'collateral': self.collateral,
            'leverage': self.leverage,
            'opened_tick': self.opened_tick,
            'margin_exempt': self.margin_exempt,
            'is_open': self.is_open,
            'close_price': self.close_price,
            'closed_tick': self.closed_tick,
            'close_reason': self.close_reason.value if self.close_reason else None,
            'realized_pnl': self.realized_pnl,
            'collateral_paid': self.collateral_paid,
            'shortfall': self.shortfall,
            'pool_paid': self.pool_paid,
            'uncovered': self.uncovered,
            'replaces': self.replaces,
            'max_requirement': self.max_requirement,
        }
