"""
Informed-trading rent profile and the engine comparison report
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Tuple

from eventperp.app.models.units import Leverage, Money
from eventperp.app.utils.errors import InvalidParameter


@dataclass(frozen=True)
class RentProfile:
    """Per-event rent of an informed strategy.

    detection_cost is a fixed USD amount and is never scaled by leverage.
    """

    unleveraged_rent_per_event: float
    return_volatility: float
    detection_cost: float
    capital: float
    leverage: float = 1.0

    def __post_init__(self):
        rent = float(self.unleveraged_rent_per_event)
        if math.isnan(rent) or math.isinf(rent):
            raise InvalidParameter(f"rent per event must be finite, got {rent}")
        volatility = float(self.return_volatility)
        if math.isnan(volatility) or volatility < 0 or math.isinf(volatility):
            raise InvalidParameter(f"return volatility must be finite and >= 0, got {volatility}")
        object.__setattr__(self, 'unleveraged_rent_per_event', rent)
        object.__setattr__(self, 'return_volatility', volatility)
        object.__setattr__(self, 'detection_cost', Money(self.detection_cost).amount)
        object.__setattr__(self, 'capital', Money(self.capital).amount)
        object.__setattr__(self, 'leverage', Leverage(self.leverage).value)

    def at_leverage(self, leverage: float) -> 'RentProfile':
        return RentProfile(
            unleveraged_rent_per_event=self.unleveraged_rent_per_event,
            return_volatility=self.return_volatility,
            detection_cost=self.detection_cost,
            capital=self.capital,
            leverage=leverage,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'unleveraged_rent_per_event': self.unleveraged_rent_per_event,
            'return_volatility': self.return_volatility,
            'detection_cost': self.detection_cost,
            'capital': self.capital,
            'leverage': self.leverage,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'RentProfile':
        return cls(
            unleveraged_rent_per_event=data['unleveraged_rent_per_event'],
            return_volatility=data['return_volatility'],
            detection_cost=data.get('detection_cost', 0.0),
            capital=data['capital'],
            leverage=data.get('leverage', 1.0),
        )


@dataclass
class EngineOutcome:
    """What one engine did to the informed trader"""

    engine: str
    trader_pnl: float
    margin_calls: int
    margin_raises: int
    max_requirement: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'engine': self.engine,
            'trader_pnl': self.trader_pnl,
            'margin_calls': self.margin_calls,
            'margin_raises': self.margin_raises,
            'max_requirement': self.max_requirement,
        }


@dataclass
class RentCompressionReport:
    """Side-by-side trader outcome under two margin engines; no direction asserted"""

    trader_id: str
    seed: int
    dynamic: EngineOutcome
    static: EngineOutcome
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def pnl_difference(self) -> float:
        return self.dynamic.trader_pnl - self.static.trader_pnl

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trader_id': self.trader_id,
            'seed': self.seed,
            'dynamic': self.dynamic.to_dict(),
            'static': self.static.to_dict(),
            'pnl_difference': self.pnl_difference,
            'notes': dict(self.notes),
        }


@dataclass
class RentEntry:
    """One `[rent <label>]` block of a rent profile file"""

    label: str
    line: int
    profile: RentProfile
    funding_cost_per_event: float = 0.0
    leverages: Tuple[float, ...] = ()
