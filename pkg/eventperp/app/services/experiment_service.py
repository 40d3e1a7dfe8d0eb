"""
Seed sweeps and engine/halt comparisons over run configs
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Sequence

import pandas as pd

from eventperp.app.models import RunConfig, RunReport
from eventperp.app.services.adversary_service import AdversaryService
from eventperp.app.services.simulation_service import SimulationService

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    'engine', 'halt_offset', 'runs', 'liquidations_total', 'liquidations_final_window',
    'comparison_window_start', 'liquidations_comparison_window', 'runs_with_comparison_window_liquidations',
    'bad_debt_total', 'uncovered_bad_debt', 'pool_drawdown', 'max_abs_ledger_residual',
]


def run_seed(job) -> RunReport:
    """Module-level so process pools can pickle it"""
    config, seed = job
    if config.attack_channel is not None:
        return AdversaryService.run_attack(config, seed)
    return SimulationService.run_market(config, seed)


class ExperimentService:
    """Runs configs over seeds, serially or in a process pool, merged in seed order"""

    @staticmethod
    def run_many(config: RunConfig, seeds: Sequence[int], workers: int = 1) -> List[RunReport]:
        jobs = [(config, seed) for seed in seeds]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(run_seed, jobs))
        else:
            reports = [run_seed(job) for job in jobs]
        return sorted(reports, key=lambda r: r.seed)

    @staticmethod
    def simulate(config: RunConfig, workers: int = 1) -> List[RunReport]:
        """Every (engine, halt offset) variant of the config over its seeds"""
        reports: List[RunReport] = []
        variants = config.variants()
        for variant in variants:
            reports.extend(ExperimentService.run_many(variant, config.seeds, workers))
        logger.info(f"Simulated {len(config.seeds)} seeds across {len(variants)} configuration(s)")
        return reports

    @staticmethod
    def comparison_window_starts(reports: Sequence[RunReport]) -> Dict[int, int]:
        """
        Earliest final-window start per resolution time

        A halted run's final window is [tau - halt_offset, tau], an unhalted
        one's the last final_window_ticks ticks. Summaries count every variant
        of a resolution time from the earliest of these starts.
        """
        starts: Dict[int, int] = {}
        for r in reports:
            tau = r.resolution_time
            starts[tau] = min(starts.get(tau, tau), r.final_window_start)
        return starts

    @staticmethod
    def summarize(reports: Sequence[RunReport]) -> pd.DataFrame:
        """Aggregate liquidations, bad debt and pool drawdown per (engine, halt offset)"""
        if not reports:
            return pd.DataFrame(columns=SUMMARY_COLUMNS)
        starts = ExperimentService.comparison_window_starts(reports)
        rows = []
        for r in reports:
            start = starts[r.resolution_time]
            in_window = r.liquidations_since(start)
            rows.append({
                'engine': r.engine_kind,
                'halt_offset': r.halt_offset,
                'liquidations_total': r.liquidations_total,
                'liquidations_final_window': r.liquidations_final_window,
                'comparison_window_start': start,
                'liquidations_comparison_window': in_window,
                'comparison_window_hit': int(in_window > 0),
                'bad_debt_total': r.bad_debt_total,
                'uncovered_bad_debt': r.uncovered_bad_debt,
                'pool_drawdown': r.pool_drawdown,
                'abs_residual': abs(r.ledger_residual),
            })
        frame = pd.DataFrame(rows)
        summary = frame.groupby(['engine', 'halt_offset'], sort=True).agg(
            runs=('liquidations_total', 'size'),
            liquidations_total=('liquidations_total', 'sum'),
            liquidations_final_window=('liquidations_final_window', 'sum'),
            comparison_window_start=('comparison_window_start', 'min'),
            liquidations_comparison_window=('liquidations_comparison_window', 'sum'),
            runs_with_comparison_window_liquidations=('comparison_window_hit', 'sum'),
            bad_debt_total=('bad_debt_total', 'sum'),
            uncovered_bad_debt=('uncovered_bad_debt', 'sum'),
            pool_drawdown=('pool_drawdown', 'sum'),
            max_abs_ledger_residual=('abs_residual', 'max'),
        ).reset_index()
        return summary[SUMMARY_COLUMNS]

    @staticmethod
    def paired_liquidations(config: RunConfig, seeds: Sequence[int], workers: int = 1) -> pd.DataFrame:
        """Liquidation counts per seed under E0 and E2 with everything else held fixed"""
        static = ExperimentService.run_many(config.with_engine(config.engine.as_kind('e0')), seeds, workers)
        dynamic = ExperimentService.run_many(config.with_engine(config.engine.as_kind('e2')), seeds, workers)
        return pd.DataFrame({
            'seed': [r.seed for r in static],
            'e0_liquidations': [r.liquidations_total for r in static],
            'e2_liquidations': [r.liquidations_total for r in dynamic],
        })
