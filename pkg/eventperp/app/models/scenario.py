"""
Outcome-manipulation scenario, threshold result and sensitivity grid models
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional

import pandas as pd

from eventperp.app.models.channel import ManipulationChannel
from eventperp.app.models.units import Leverage, Money, Probability
from eventperp.app.utils.errors import DegenerateProbability, InvalidParameter
from eventperp.config.settings import PROBABILITY_EPSILON

SCENARIO_FIELDS = ('k_manip', 'capital', 'pi_yes', 'p_detected', 'penalty_factor')
GRID_COLUMNS = ['label', 'k', 'p_det', 'penalty', 'capital', 'pi_yes', 'l_star', 'regime']


class Regime(str, Enum):
    """Which term of the threshold drives its size"""
    COST_DOMINATED = 'CostDominated'
    DETECTION_DOMINATED = 'DetectionDominated'
    MIXED = 'Mixed'


@dataclass(frozen=True)
class ManipulationScenario:
    """Parameter bundle for the outcome-manipulation profit and threshold.

    k_manip is the real-world cost of moving the outcome, capital the trader's
    collateral C, penalty_factor a multiple of C paid on detection.
    """

    k_manip: float
    capital: float
    pi_yes: float
    p_detected: float
    penalty_factor: float
    leverage: Optional[float] = None
    label: str = ''
    event_class: Optional[str] = None

    @property
    def channel(self) -> Optional[ManipulationChannel]:
        if self.event_class is None:
            return None
        return ManipulationChannel.for_event_class(self.event_class)

    @property
    def notional(self) -> Optional[float]:
        if self.leverage is None:
            return None
        return self.leverage * self.capital

    def with_values(self, **changes) -> 'ManipulationScenario':
        """Copy with some fields replaced, re-validated"""
        data = self.to_dict()
        data.update(changes)
        return validate_scenario(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'k_manip': self.k_manip,
            'capital': self.capital,
            'pi_yes': self.pi_yes,
            'p_detected': self.p_detected,
            'penalty_factor': self.penalty_factor,
            'leverage': self.leverage,
            'event_class': self.event_class,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'ManipulationScenario':
        return validate_scenario(data)


def validate_scenario(raw: Mapping[str, Any]) -> ManipulationScenario:
    """
    Validate raw numeric inputs into a scenario

    Args:
        raw: Mapping with k_manip, capital, pi_yes, p_detected, penalty_factor
            and optionally leverage, label, event_class

    Returns:
        ManipulationScenario holding the inputs unchanged

    Raises:
        InvalidParameter: missing or out-of-range field
        DegenerateProbability: pi_yes >= 1 - epsilon
    """
    missing = [name for name in SCENARIO_FIELDS if raw.get(name) is None]
    if missing:
        raise InvalidParameter(f"missing scenario fields: {', '.join(missing)}")

    k_manip = Money(raw['k_manip']).amount
    capital = Money(raw['capital']).amount
    pi_yes = Probability(raw['pi_yes']).value
    p_detected = Probability(raw['p_detected']).value

    try:
        penalty_factor = float(raw['penalty_factor'])
    except (TypeError, ValueError):
        raise InvalidParameter(f"penalty_factor must be a number, got {raw['penalty_factor']!r}")
    if math.isnan(penalty_factor) or math.isinf(penalty_factor) or penalty_factor < 0:
        raise InvalidParameter(f"penalty_factor must be finite and >= 0, got {penalty_factor}")

    if pi_yes >= 1.0 - PROBABILITY_EPSILON:
        raise DegenerateProbability(f"pi_yes={pi_yes} leaves no room for the threshold denominator")

    event_class = raw.get('event_class') or None
    if event_class is not None:
        try:
            ManipulationChannel.for_event_class(event_class)
        except ValueError as e:
            raise InvalidParameter(str(e))

    leverage = raw.get('leverage')
    if leverage is not None and leverage != '':
        leverage = Leverage(leverage).value
    else:
        leverage = None

    return ManipulationScenario(
        k_manip=k_manip,
        capital=capital,
        pi_yes=pi_yes,
        p_detected=p_detected,
        penalty_factor=penalty_factor,
        leverage=leverage,
        label=str(raw.get('label') or ''),
        event_class=event_class,
    )


@dataclass(frozen=True)
class ThresholdResult:
    """Leverage threshold split into its cost and detection terms.

    raw_l_star = cost_term + detection_term. l_star is raw_l_star clamped
    to the minimum admissible leverage of 1; always_profitable marks the clamp.
    """

    l_star: float
    raw_l_star: float
    cost_term: float
    detection_term: float
    regime: Regime
    always_profitable: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'l_star': self.l_star,
            'raw_l_star': self.raw_l_star,
            'cost_term': self.cost_term,
            'detection_term': self.detection_term,
            'regime': self.regime.value,
            'always_profitable': self.always_profitable,
        }


@dataclass(frozen=True)
class GridPoint:
    index: int
    scenario: ManipulationScenario
    result: ThresholdResult

    def to_row(self) -> Dict[str, Any]:
        return {
            'label': self.scenario.label,
            'k': self.scenario.k_manip,
            'p_det': self.scenario.p_detected,
            'penalty': self.scenario.penalty_factor,
            'capital': self.scenario.capital,
            'pi_yes': self.scenario.pi_yes,
            'l_star': self.result.l_star,
            'regime': self.result.regime.value,
        }


@dataclass
class SensitivityGrid:
    """Threshold values over the cartesian product of parameter axes"""

    label: str
    axes: Dict[str, List[float]]
    points: List[GridPoint] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    @property
    def l_star_values(self) -> List[float]:
        return [point.result.l_star for point in self.points]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([point.to_row() for point in self.points], columns=GRID_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'axes': {name: list(values) for name, values in self.axes.items()},
            'points': [point.to_row() for point in self.points],
        }



@dataclass
class ScenarioEntry:
    """One `[scenario]` block as read from a file; error is set when the block did not validate"""

    label: str
    line: int
    scenario: Optional[ManipulationScenario] = None
    error: Optional[str] = None
    axes: Dict[str, List[float]] = field(default_factory=dict)
    band: Optional[tuple] = None
    note: str = ''

    @property
    def ok(self) -> bool:
        return self.scenario is not None
