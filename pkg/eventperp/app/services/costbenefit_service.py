"""
Outcome-manipulation cost-benefit: expected profit, leverage threshold, regimes and sweeps
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from eventperp.app.models import (
    GridPoint,
    ManipulationScenario,
    Regime,
    SensitivityGrid,
    ThresholdResult,
    validate_scenario,
)
from eventperp.app.utils.errors import (
    DegenerateProbability,
    EventPerpError,
    InvalidParameter,
    InvariantViolation,
    MissingLeverage,
    ZeroCapital,
)
from eventperp.config.settings import PROBABILITY_EPSILON, REGIME_RATIO_CUTOFF

logger = logging.getLogger(__name__)

# Sweep axes in grid-index order; the sign is the direction l_star moves as the axis grows
SWEEP_AXES: Tuple[Tuple[str, int], ...] = (
    ('k_manip', 1),
    ('p_detected', 1),
    ('penalty_factor', 1),
    ('capital', -1),
    ('pi_yes', 1),
)


def _regime(cost_term: float, detection_term: float, ratio_cutoff: float) -> Regime:
    if cost_term / max(detection_term, PROBABILITY_EPSILON) >= ratio_cutoff:
        return Regime.COST_DOMINATED
    if detection_term / max(cost_term, PROBABILITY_EPSILON) >= ratio_cutoff:
        return Regime.DETECTION_DOMINATED
    return Regime.MIXED


class CostBenefitService:
    """Closed-form profit and threshold arithmetic for outcome manipulation"""

    @staticmethod
    def expected_manipulation_profit(s: ManipulationScenario) -> float:
        """
        N(1 - pi_yes) - K - C * P_det * penalty, with N = L * C

        Raises:
            MissingLeverage: scenario carries no leverage
        """
        if s.leverage is None:
            raise MissingLeverage(f"scenario {s.label or '<unlabelled>'} has no leverage to evaluate profit at")
        return CostBenefitService.profit_at(s, s.leverage)

    @staticmethod
    def profit_at(s: ManipulationScenario, leverage: float) -> float:
        """Expected profit at an arbitrary leverage, without the L >= 1 check"""
        notional = leverage * s.capital
        return notional * (1.0 - s.pi_yes) - s.k_manip - s.capital * s.p_detected * s.penalty_factor

    @staticmethod
    def profit_curve(s: ManipulationScenario, leverages: Sequence[float]) -> List[Dict[str, float]]:
        """Expected profit over a leverage sequence (break-even chart data)"""
        return [
            {'leverage': float(leverage), 'profit': CostBenefitService.profit_at(s, float(leverage))}
            for leverage in leverages
        ]

    @staticmethod
    def leverage_threshold(s: ManipulationScenario, ratio_cutoff: float = REGIME_RATIO_CUTOFF) -> ThresholdResult:
        """
        Leverage at which expected manipulation profit crosses zero

        l_star = K / (C (1 - pi)) + P_det * penalty / (1 - pi). Values below 1
        are reported as 1 with always_profitable set.

        Raises:
            ZeroCapital: C == 0
            DegenerateProbability: pi_yes >= 1 - epsilon
        """
        if s.capital == 0:
            raise ZeroCapital(f"scenario {s.label or '<unlabelled>'} has zero capital")
        if s.pi_yes >= 1.0 - PROBABILITY_EPSILON:
            raise DegenerateProbability(f"pi_yes={s.pi_yes} leaves no room for the threshold denominator")

        headroom = 1.0 - s.pi_yes
        cost_term = s.k_manip / (s.capital * headroom)
        detection_term = s.p_detected * s.penalty_factor / headroom
        raw_l_star = cost_term + detection_term
        always_profitable = raw_l_star < 1.0

        return ThresholdResult(
            l_star=1.0 if always_profitable else raw_l_star,
            raw_l_star=raw_l_star,
            cost_term=cost_term,
            detection_term=detection_term,
            regime=_regime(cost_term, detection_term, ratio_cutoff),
            always_profitable=always_profitable,
        )

    @staticmethod
    def exact_leverage_threshold(s: ManipulationScenario) -> Fraction:
        """Unclamped threshold in exact rational arithmetic over the decimal inputs"""
        if s.capital == 0:
            raise ZeroCapital(f"scenario {s.label or '<unlabelled>'} has zero capital")
        k = Fraction(repr(s.k_manip))
        capital = Fraction(repr(s.capital))
        pi_yes = Fraction(repr(s.pi_yes))
        p_detected = Fraction(repr(s.p_detected))
        penalty = Fraction(repr(s.penalty_factor))
        if pi_yes >= 1:
            raise DegenerateProbability(f"pi_yes={s.pi_yes} leaves no room for the threshold denominator")
        return (k + capital * p_detected * penalty) / (capital * (1 - pi_yes))

    @staticmethod
    def classify_regime(t: ThresholdResult, ratio_cutoff: float = REGIME_RATIO_CUTOFF) -> Regime:
        """CostDominated / DetectionDominated when one term exceeds the other by ratio_cutoff"""
        return _regime(t.cost_term, t.detection_term, ratio_cutoff)

    @staticmethod
    def sweep_thresholds(
        template: ManipulationScenario,
        axes: Mapping[str, Sequence[float]],
        label: Optional[str] = None,
        workers: int = 1,
    ) -> SensitivityGrid:
        """
        Threshold over the cartesian product of axis values

        Args:
            template: Scenario supplying every value an axis does not override
            axes: Axis name (k_manip, p_detected, penalty_factor, capital, pi_yes) to values
            label: Grid label, defaults to the template label
            workers: Process count; output order is grid-index order regardless

        Raises:
            InvalidParameter: unknown or empty axis
            EventPerpError: an invalid grid point, with the point named
        """
        known = {name for name, _ in SWEEP_AXES}
        unknown = set(axes) - known
        if unknown:
            raise InvalidParameter(f"unknown sweep axes: {', '.join(sorted(unknown))}")

        resolved: Dict[str, List[float]] = {}
        for name, _ in SWEEP_AXES:
            values = axes.get(name)
            if values is None:
                values = [getattr(template, name)]
            values = [float(v) for v in values]
            if not values:
                raise InvalidParameter(f"sweep axis {name} has no values")
            resolved[name] = values

        label = label if label is not None else template.label
        base = template.to_dict()
        base['label'] = label

        scenarios = []
        for index, combo in enumerate(itertools.product(*resolved.values())):
            point = dict(base)
            point.update(zip(resolved.keys(), combo))
            try:
                scenarios.append(validate_scenario(point))
            except EventPerpError as e:
                raise type(e)(f"grid point {index} {_describe(point)}: {e.message}") from e

        if workers > 1 and len(scenarios) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_safe_threshold, scenarios))
        else:
            outcomes = [_safe_threshold(scenario) for scenario in scenarios]

        points = []
        for index, (scenario, outcome) in enumerate(zip(scenarios, outcomes)):
            if isinstance(outcome, EventPerpError):
                raise type(outcome)(f"grid point {index} {_describe(scenario.to_dict())}: {outcome.message}")
            points.append(GridPoint(index=index, scenario=scenario, result=outcome))

        grid = SensitivityGrid(label=label, axes=resolved, points=points)
        CostBenefitService.check_monotonicity(grid)
        logger.info(f"Swept {len(grid)} grid points for scenario {label or '<unlabelled>'}")
        return grid

    @staticmethod
    def check_monotonicity(grid: SensitivityGrid):
        """
        Verify l_star moves the expected way along every axis

        Raises:
            InvariantViolation: a pair of neighbouring points moves the wrong way
        """
        for axis, direction in SWEEP_AXES:
            groups: Dict[tuple, List[GridPoint]] = {}
            for point in grid.points:
                key = tuple(getattr(point.scenario, name) for name, _ in SWEEP_AXES if name != axis)
                groups.setdefault(key, []).append(point)
            for members in groups.values():
                members.sort(key=lambda p: getattr(p.scenario, axis))
                for lower, upper in zip(members, members[1:]):
                    delta = upper.result.raw_l_star - lower.result.raw_l_star
                    tolerance = 1e-12 * max(abs(upper.result.raw_l_star), 1.0)
                    if direction * delta < -tolerance:
                        raise InvariantViolation(
                            f"l_star moved against {axis} between grid points "
                            f"{lower.index} and {upper.index}"
                        )

    @staticmethod
    def band_deviation(grid: SensitivityGrid, band: Tuple[float, Optional[float]]) -> Dict[str, Any]:
        """
        Compare a grid's range to a stated band with one order of magnitude of slack

        Args:
            grid: Computed sensitivity grid
            band: (low, high); high None means an open band "> low"

        Returns:
            Dict with the computed range, the band, and a within-tolerance flag per endpoint
        """
        values = grid.l_star_values
        computed_min, computed_max = min(values), max(values)
        low, high = band

        def within(computed: float, stated: float) -> bool:
            if computed <= 0 or stated <= 0:
                return False
            return abs(math.log10(computed / stated)) <= 1.0

        if high is None:
            low_ok = computed_min >= low / 10.0
            high_ok = True
        else:
            low_ok = within(computed_min, low)
            high_ok = within(computed_max, high)

        base_point = _base_point(grid)
        return {
            'label': grid.label,
            'computed_min': computed_min,
            'computed_max': computed_max,
            'computed_base': base_point.result.l_star if base_point else None,
            'band_low': low,
            'band_high': high,
            'low_within_order': low_ok,
            'high_within_order': high_ok,
        }


def _safe_threshold(scenario: ManipulationScenario):
    try:
        return CostBenefitService.leverage_threshold(scenario)
    except EventPerpError as e:
        return e


def _describe(point: Mapping[str, Any]) -> str:
    fields = ', '.join(f"{name}={point.get(name)}" for name, _ in SWEEP_AXES)
    return f"({fields})"


def _base_point(grid: SensitivityGrid) -> Optional[GridPoint]:
    """Middle value on every axis (the base case of a low/base/high sweep)"""
    base = {name: values[len(values) // 2] for name, values in grid.axes.items()}
    for point in grid.points:
        if all(getattr(point.scenario, name) == value for name, value in base.items()):
            return point
    return None
