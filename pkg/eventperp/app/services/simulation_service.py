"""
Full deterministic venue episodes
"""
import logging
from typing import Dict, List, Optional, Tuple

from eventperp.app.models import AgentSpec, RunConfig, RunReport
from eventperp.app.services.agent_service import AgentService
from eventperp.app.services.index_path_service import IndexPathService
from eventperp.app.services.venue_service import Action, VenueService

logger = logging.getLogger(__name__)


class Strategy:
    """
    Hook for an adversary inside a run.

    prepare() runs at tick 0 after the roster opens and before the pool is
    funded; actions_for() returns the actions to run inside a tick, after
    exogenous orders.
    """

    def prepare(self, venue: VenueService):
        pass

    def actions_for(self, tick: int) -> List[Action]:
        return []


def _opener(agents: List[AgentSpec], tick: int) -> Action:
    def open_late(venue: VenueService):
        AgentService.open_roster(venue, agents, tick)
    return open_late


class SimulationService:
    """Runs one seeded episode from a RunConfig"""

    @staticmethod
    def build_venue(config: RunConfig, seed: int) -> VenueService:
        path = IndexPathService.generate_index_path(
            config.market, seed, config.volatility, config.hold_final_ticks
        )
        return VenueService(
            config.market,
            config.engine,
            path,
            ladder=config.ladder,
            impact_persistence=config.impact_persistence,
            pool_fraction=config.pool_fraction,
        )

    @staticmethod
    def run_market(config: RunConfig, seed: int, strategy: Optional[Strategy] = None) -> RunReport:
        report, _ = SimulationService.run_venue(config, seed, strategy)
        return report

    @staticmethod
    def run_venue(config: RunConfig, seed: int,
                  strategy: Optional[Strategy] = None) -> Tuple[RunReport, VenueService]:
        """
        Run one episode to settlement and return its report with the settled venue

        The exogenous order schedule depends only on (seed, roster), so a run
        with a strategy and one without see identical flow.
        """
        venue = SimulationService.build_venue(config, seed)
        AgentService.open_roster(venue, config.agents)
        if strategy is not None:
            strategy.prepare(venue)
        venue.fund_pool()

        orders = AgentService.order_schedule(config.market, config.agents, seed)
        late: Dict[int, List[AgentSpec]] = AgentService.late_openers(config.agents)

        while venue.state.tick < venue.state.resolution_time:
            tick = venue.state.tick + 1
            actions: List[Action] = []
            if tick in late:
                actions.append(_opener(late[tick], tick))
            if strategy is not None:
                actions.extend(strategy.actions_for(tick))
            venue.step(orders.get(tick, ()), actions)

        venue.settle()
        report = venue.build_report(seed)
        logger.debug(
            f"Run seed {seed} ({config.engine.kind.value}, halt {config.market.halt_offset}): "
            f"{report.liquidations_total} liquidations, bad debt {report.bad_debt_total:.2f}"
        )
        return report, venue
