"""
Agent roster: initial positions and seeded exogenous order streams
"""
import logging
from typing import Dict, List, Sequence

import numpy as np

from eventperp.app.models import AgentKind, AgentSpec, MarketSpec, Order
from eventperp.app.services.venue_service import VenueService

logger = logging.getLogger(__name__)


class AgentService:
    """Turns AgentSpecs into positions and per-tick orders"""

    @staticmethod
    def open_roster(venue: VenueService, agents: Sequence[AgentSpec], tick: int = 0) -> int:
        """Open the positions of every position-holding agent whose open_tick is `tick`"""
        opened = 0
        for agent in agents:
            if not agent.holds_positions or agent.open_tick != tick:
                continue
            side = agent.position_side(venue.spec.outcome)
            for _ in range(agent.count):
                venue.open_pair(
                    agent.agent_id, side, agent.notional, agent.leverage,
                    counterparty_id=agent.counterparty,
                    counterparty_leverage=agent.counterparty_leverage,
                )
                opened += 1
        if opened:
            logger.debug(f"Opened {opened} roster positions at tick {tick}")
        return opened

    @staticmethod
    def late_openers(agents: Sequence[AgentSpec]) -> Dict[int, List[AgentSpec]]:
        schedule: Dict[int, List[AgentSpec]] = {}
        for agent in agents:
            if agent.holds_positions and agent.open_tick > 0:
                schedule.setdefault(agent.open_tick, []).append(agent)
        return schedule

    @staticmethod
    def order_schedule(spec: MarketSpec, agents: Sequence[AgentSpec], seed: int) -> Dict[int, List[Order]]:
        """
        Exogenous orders per tick, identical for a given seed and roster

        Each agent draws from its own numpy stream keyed by (seed, roster slot),
        so adding an agent never perturbs the others or the index path.
        """
        schedule: Dict[int, List[Order]] = {}
        last_trading_tick = spec.resolution_time - 1
        for slot, agent in enumerate(agents, start=1):
            if agent.kind is AgentKind.NOISE:
                orders = AgentService._noise_orders(agent, seed, slot, last_trading_tick)
            elif agent.kind is AgentKind.VOL_INJECTOR:
                orders = AgentService._injection_orders(agent, last_trading_tick)
            else:
                continue
            for tick, order in orders:
                schedule.setdefault(tick, []).append(order)
        return schedule

    @staticmethod
    def _noise_orders(agent: AgentSpec, seed: int, slot: int, last_tick: int):
        rng = np.random.default_rng([seed, slot])
        ticks = np.arange(max(agent.start_tick, 1), last_tick + 1)
        active = rng.random(len(ticks)) < agent.activity
        directions = np.where(rng.random(len(ticks)) < 0.5, -1, 1)
        sizes = agent.quantity * rng.uniform(0.5, 1.5, size=len(ticks))
        return [
            (int(tick), Order(agent.agent_id, int(direction), float(size)))
            for tick, is_active, direction, size in zip(ticks, active, directions, sizes)
            if is_active and size > 0
        ]

    @staticmethod
    def _injection_orders(agent: AgentSpec, last_tick: int):
        """Alternating buy/sell legs; an odd leg count gets a closing sell so the flow nets to zero"""
        return injection_legs(agent.agent_id, agent.quantity, agent.start_tick, agent.ticks, last_tick)


def injection_legs(agent_id: str, quantity: float, start_tick: int, ticks: int, last_tick: int):
    legs = ticks + (ticks % 2)
    orders = []
    for k in range(legs):
        tick = start_tick + k
        if tick > last_tick:
            break
        orders.append((tick, Order(agent_id, 1 if k % 2 == 0 else -1, quantity)))
    return orders
