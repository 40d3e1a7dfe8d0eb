"""
Mutable state of one venue run
"""
import math
from collections import deque
from typing import Any, Dict, List, Optional

import numpy as np

from eventperp.app.models.ladder import DepthLadder
from eventperp.app.models.market import IndexPath
from eventperp.app.models.position import Position
from eventperp.app.models.venue_event import EventKind, VenueEvent


class SpoofOrder:
    """Resting non-bona-fide quantity at a fixed price"""

    def __init__(self, agent_id: str, direction: int, price: float, quantity: float, shift: float, placed_tick: int):
        self.agent_id = agent_id
        self.direction = direction  # +1 resting bid, -1 resting offer
        self.price = price
        self.quantity = quantity
        self.shift = shift
        self.placed_tick = placed_tick
        self.filled_quantity = 0.0
        self.fill_position_ids: List[int] = []

    @property
    def remaining(self) -> float:
        return self.quantity - self.filled_quantity

    def shift_after(self, ticks: int, persistence: float) -> float:
        """Quote shift still in the index `ticks` after placement"""
        return self.shift * persistence ** ticks


class VenueState:
    """
    Clock, index, ladder, positions, insurance pool and event log.

    The index is the exogenous path value plus order-flow displacement,
    clipped to [0, 1]. Cash flows are kept per agent so the ledger can be
    summed exactly at the end of the run.
    """

    def __init__(self, path: IndexPath, ladder: DepthLadder, vol_window: int):
        self.path = path
        self.ladder = ladder
        self.tick = 0
        self.index = path[0]
        self.displacement = 0.0
        self.positions: Dict[int, Position] = {}
        self.next_position_id = 1
        self.pool_initial = 0.0
        self.pool_balance = 0.0
        self.uncovered_bad_debt = 0.0
        self.bad_debt: List[float] = []
        self.halted = False
        self.settled = False
        self.returns = deque(maxlen=vol_window)
        self.events: List[VenueEvent] = []
        self.agent_flows: Dict[str, List[float]] = {}
        self.observed_index: List[float] = [self.index]
        self.spoofs: List[SpoofOrder] = []

    @property
    def resolution_time(self) -> int:
        return self.path.resolution_time

    @property
    def time_to_resolution(self) -> int:
        return self.resolution_time - self.tick

    def open_positions(self) -> List[Position]:
        """Open positions in ascending id order"""
        return [p for p in self.positions.values() if p.is_open]

    def positions_of(self, owner_id: str) -> List[Position]:
        return [p for p in self.positions.values() if p.owner_id == owner_id]

    def realized_vol(self) -> float:
        """Population standard deviation of the index returns in the rolling window"""
        if len(self.returns) < 2:
            return 0.0
        return float(np.std(np.fromiter(self.returns, dtype=float)))

    def set_index(self, value: float):
        self.index = min(1.0, max(0.0, value))

    def credit(self, agent_id: str, amount: float):
        """Record a cash flow to an agent (negative for payments)"""
        self.agent_flows.setdefault(agent_id, []).append(amount)

    def agent_pnl(self) -> Dict[str, float]:
        return {agent: math.fsum(flows) for agent, flows in sorted(self.agent_flows.items())}

    def record(self, kind: EventKind, position_id: Optional[int] = None, amount: float = 0.0,
               agent_id: Optional[str] = None, details: Optional[Dict[str, Any]] = None) -> VenueEvent:
        event = VenueEvent(
            tick=self.tick,
            index=self.index,
            kind=kind,
            position_id=position_id,
            amount=amount,
            agent_id=agent_id,
            details=details,
        )
        self.events.append(event)
        return event

    def events_of(self, kind: EventKind) -> List[VenueEvent]:
        return [event for event in self.events if event.kind is kind]
