"""
Synthetic index paths: logit-space Gaussian random walk pinned to the outcome
"""
import logging

import numpy as np

from eventperp.app.models import IndexPath, MarketSpec
from eventperp.app.utils.errors import InvalidParameter
from eventperp.config.settings import INDEX_VOLATILITY

logger = logging.getLogger(__name__)


def logistic(x):
    return 1.0 / (1.0 + np.exp(-x))


def logit(p: float) -> float:
    return float(np.log(p / (1.0 - p)))


class IndexPathService:
    """Deterministic bounded index paths per seed"""

    @staticmethod
    def generate_index_path(spec: MarketSpec, seed: int, volatility: float = INDEX_VOLATILITY,
                            hold_final_ticks: int = 0) -> IndexPath:
        """
        Generate I_0..I_tau for one market

        The walk starts at logit(spec.start_index) and takes tau - 1 Gaussian
        steps of size `volatility`; I_tau is the outcome. The walk is symmetric,
        so the median terminal jump from a 0.5 start is 0.5 at any volatility.

        Args:
            spec: Market spec (tau, outcome, start index)
            seed: Seed for numpy's default_rng
            volatility: Per-tick standard deviation in logit units; 0 gives a flat path
            hold_final_ticks: Hold the value at tau - hold_final_ticks flat until tau - 1
        """
        if volatility < 0 or not np.isfinite(volatility):
            raise InvalidParameter(f"index volatility must be finite and >= 0, got {volatility}")

        rng = np.random.default_rng(seed)
        steps = rng.normal(0.0, 1.0, size=spec.resolution_time - 1) * volatility
        walk = logit(spec.start_index) + np.concatenate(([0.0], np.cumsum(steps)))
        values = np.clip(logistic(walk), 0.0, 1.0).tolist()
        if hold_final_ticks > 0:
            anchor = spec.resolution_time - hold_final_ticks
            values[anchor:] = [values[anchor]] * (len(values) - anchor)
        values.append(float(spec.outcome))

        logger.debug(f"Generated index path for seed {seed}: {len(values)} values, vol {volatility}")
        return IndexPath.from_values(values)

    @staticmethod
    def constant_path(spec: MarketSpec, level: float) -> IndexPath:
        """Flat path at `level` until tau, then the outcome"""
        if not 0.0 <= level <= 1.0:
            raise InvalidParameter(f"path level must lie in [0, 1], got {level}")
        return IndexPath.from_values([level] * spec.resolution_time + [float(spec.outcome)])
