"""
Maintenance requirements under the static and dynamic margin engines
"""
import logging

from eventperp.app.models import MarginEngine, MarginRequirement, Position, VenueState

logger = logging.getLogger(__name__)


class MarginService:
    """Per-position maintenance requirement, broken into its stress terms"""

    @staticmethod
    def stress_terms(engine: MarginEngine, pos: Position, state: VenueState):
        """(vol_excess, ttr_shrink, entry_distance) for a position at the current tick"""
        vol_excess = max(0.0, state.realized_vol() / engine.vol_reference - 1.0)
        ttr_shrink = max(0.0, 1.0 - state.time_to_resolution / engine.ttr_reference)
        entry_distance = abs(state.index - pos.entry_price)
        return vol_excess, ttr_shrink, entry_distance

    @staticmethod
    def breakdown(engine: MarginEngine, pos: Position, state: VenueState) -> MarginRequirement:
        static = engine.maintenance_fraction * pos.notional
        if not engine.is_dynamic:
            return MarginRequirement(
                static=static, without_vol=static, total=static,
                vol_excess=0.0, ttr_shrink=0.0, entry_distance=0.0,
            )

        vol_excess, ttr_shrink, entry_distance = MarginService.stress_terms(engine, pos, state)
        other_stress = (
            engine.ttr_coefficient * ttr_shrink
            + engine.entry_distance_coefficient * entry_distance
        )
        vol_stress = engine.vol_coefficient * vol_excess
        return MarginRequirement(
            static=static,
            without_vol=static * (1.0 + other_stress),
            total=static * (1.0 + vol_stress + other_stress),
            vol_excess=vol_excess,
            ttr_shrink=ttr_shrink,
            entry_distance=entry_distance,
        )

    @staticmethod
    def maintenance_requirement(engine: MarginEngine, pos: Position, state: VenueState) -> float:
        """
        StaticE0: m0 * N.
        DynamicE2: m0 * N * (1 + alpha * vol_excess + beta * ttr_shrink + gamma * entry_distance)
        """
        return MarginService.breakdown(engine, pos, state).total
