"""
Leverage effects on informed-trading rents
"""
import logging
from typing import Any, Dict, List, Optional, Sequence

from eventperp.app.models import (
    EngineKind,
    EngineOutcome,
    EventKind,
    ManipulationScenario,
    RentCompressionReport,
    RentProfile,
    RunConfig,
    RunReport,
)
from eventperp.app.services.costbenefit_service import CostBenefitService
from eventperp.app.services.simulation_service import SimulationService
from eventperp.app.utils.errors import DegenerateVolatility, InvalidParameter, MismatchedRuns, ZeroRent

logger = logging.getLogger(__name__)

RENT_TABLE_COLUMNS = ['label', 'leverage', 'leveraged_rent', 'sharpe_ratio', 'detection_cost_per_profit']


class RentService:
    """Rent multiplication, Sharpe invariance and detection-cost amortization"""

    @staticmethod
    def leveraged_rent(p: RentProfile) -> float:
        """Absolute USD rent per event: L * r * C"""
        return p.leverage * p.unleveraged_rent_per_event * p.capital

    @staticmethod
    def sharpe_ratio(p: RentProfile, funding_cost_per_event: float = 0.0) -> float:
        """
        (L * r - funding) / (L * sigma)

        Raises:
            DegenerateVolatility: sigma == 0
        """
        if p.return_volatility == 0:
            raise DegenerateVolatility("Sharpe ratio is undefined for zero return volatility")
        leveraged_return = p.leverage * p.unleveraged_rent_per_event
        return (leveraged_return - funding_cost_per_event) / (p.leverage * p.return_volatility)

    @staticmethod
    def detection_cost_per_profit(p: RentProfile) -> float:
        """
        Fixed detection cost per dollar of leveraged rent: D / (L * r * C)

        Raises:
            ZeroRent: leveraged rent is not positive
        """
        rent = RentService.leveraged_rent(p)
        if rent <= 0:
            raise ZeroRent(f"detection cost per profit needs positive rent, got {rent}")
        return p.detection_cost / rent

    @staticmethod
    def rent_table(p: RentProfile, leverages: Sequence[float], funding_cost_per_event: float = 0.0,
                   label: Optional[str] = None) -> List[Dict[str, Any]]:
        """
        The three leverage effects at each leverage in `leverages`

        A Sharpe ratio under zero volatility and a detection cost per profit
        under zero rent are undefined and reported as None.

        Raises:
            InvalidParameter: no leverages, or a leverage below 1
        """
        if not leverages:
            raise InvalidParameter("rent table needs at least one leverage")
        rows = []
        for leverage in leverages:
            at = p.at_leverage(leverage)
            row = {
                'label': label,
                'leverage': at.leverage,
                'leveraged_rent': RentService.leveraged_rent(at),
                'sharpe_ratio': None,
                'detection_cost_per_profit': None,
            }
            try:
                row['sharpe_ratio'] = RentService.sharpe_ratio(at, funding_cost_per_event)
            except DegenerateVolatility:
                pass
            try:
                row['detection_cost_per_profit'] = RentService.detection_cost_per_profit(at)
            except ZeroRent:
                pass
            rows.append(row)
        return rows

    @staticmethod
    def leverage_cap_check(s: ManipulationScenario, leverage_cap: float) -> Dict[str, Any]:
        """Whether a venue leverage cap reaches the scenario's manipulation threshold"""
        if leverage_cap < 1:
            raise InvalidParameter(f"leverage cap must be >= 1, got {leverage_cap}")
        threshold = CostBenefitService.leverage_threshold(s)
        return {
            'label': s.label,
            'leverage_cap': leverage_cap,
            'l_star': threshold.l_star,
            'regime': threshold.regime.value,
            'profitable_within_cap': leverage_cap > threshold.l_star or threshold.always_profitable,
        }

    @staticmethod
    def rent_compression_check(dynamic_run: RunReport, static_run: RunReport, trader_id: str) -> RentCompressionReport:
        """
        Report the informed trader's PnL and margin activity under both engines

        No direction is asserted; the two runs must share seed, path and roster.

        Raises:
            MismatchedRuns: seeds, paths or market specs differ
            InvalidParameter: the trader holds no position in either run
        """
        if dynamic_run.seed != static_run.seed:
            raise MismatchedRuns(f"runs use different seeds ({dynamic_run.seed} vs {static_run.seed})")
        if dynamic_run.path_digest != static_run.path_digest:
            raise MismatchedRuns("runs were driven by different index paths")
        if dynamic_run.market != static_run.market:
            raise MismatchedRuns("runs use different market specs")

        outcomes = []
        for run in (dynamic_run, static_run):
            trader_positions = [p for p in run.positions if p['owner_id'] == trader_id]
            if not trader_positions:
                raise InvalidParameter(f"trader {trader_id} holds no position in the {run.engine_kind} run")
            outcomes.append(EngineOutcome(
                engine=run.engine_kind,
                trader_pnl=run.pnl_of(trader_id),
                margin_calls=run.count(EventKind.LIQUIDATION, trader_id),
                margin_raises=run.count(EventKind.MARGIN_RAISE, trader_id),
                max_requirement=max(p['max_requirement'] for p in trader_positions),
            ))

        dynamic, static = outcomes
        if dynamic_run.engine_kind != EngineKind.DYNAMIC_E2.value or static_run.engine_kind != EngineKind.STATIC_E0.value:
            logger.warning(
                f"Rent compression check comparing {dynamic.engine} against {static.engine}; "
                f"expected e2 against e0"
            )

        report = RentCompressionReport(trader_id=trader_id, seed=dynamic_run.seed, dynamic=dynamic, static=static)
        logger.info(
            f"Rent compression for {trader_id} (seed {report.seed}): "
            f"PnL {dynamic.trader_pnl:.2f} vs {static.trader_pnl:.2f}, "
            f"margin calls {dynamic.margin_calls} vs {static.margin_calls}"
        )
        return report

    @staticmethod
    def compare_engines(config: RunConfig, seed: int, trader_id: str) -> RentCompressionReport:
        """Run the config under E2 and E0 on one seed and compare the trader"""
        dynamic = SimulationService.run_market(config.with_engine(config.engine.as_kind('e2')), seed)
        static = SimulationService.run_market(config.with_engine(config.engine.as_kind('e0')), seed)
        return RentService.rent_compression_check(dynamic, static, trader_id)
