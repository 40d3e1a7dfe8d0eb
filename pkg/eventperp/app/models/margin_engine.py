"""
Margin engine configuration
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping

from eventperp.app.utils.errors import InvalidParameter
from eventperp.config.settings import (
    ENTRY_DISTANCE_COEFFICIENT,
    MAINTENANCE_FRACTION,
    TTR_COEFFICIENT,
    TTR_REFERENCE_TICKS,
    VOL_COEFFICIENT,
    VOL_REFERENCE,
    VOL_WINDOW_TICKS,
)


class EngineKind(str, Enum):
    STATIC_E0 = 'e0'
    DYNAMIC_E2 = 'e2'


@dataclass(frozen=True)
class MarginEngine:
    """
    Static baseline (E0) or dynamic schedule (E2).

    E2 scales the static requirement m0 * N by
    1 + alpha * vol_excess + beta * ttr_shrink + gamma * entry_distance.
    """

    kind: EngineKind = EngineKind.DYNAMIC_E2
    maintenance_fraction: float = MAINTENANCE_FRACTION
    vol_coefficient: float = VOL_COEFFICIENT
    ttr_coefficient: float = TTR_COEFFICIENT
    entry_distance_coefficient: float = ENTRY_DISTANCE_COEFFICIENT
    vol_reference: float = VOL_REFERENCE
    ttr_reference: int = TTR_REFERENCE_TICKS
    vol_window: int = VOL_WINDOW_TICKS

    def __post_init__(self):
        object.__setattr__(self, 'kind', EngineKind(self.kind))
        if not 0.0 < self.maintenance_fraction < 1.0:
            raise InvalidParameter(f"maintenance_fraction must lie in (0, 1), got {self.maintenance_fraction}")
        for name in ('vol_coefficient', 'ttr_coefficient', 'entry_distance_coefficient'):
            if getattr(self, name) < 0:
                raise InvalidParameter(f"{name} must be >= 0")
        if self.vol_reference <= 0:
            raise InvalidParameter("vol_reference must be > 0")
        if self.ttr_reference <= 0:
            raise InvalidParameter("ttr_reference must be > 0")
        if self.vol_window < 2:
            raise InvalidParameter("vol_window must cover at least 2 returns")

    @property
    def is_dynamic(self) -> bool:
        return self.kind is EngineKind.DYNAMIC_E2

    def as_kind(self, kind) -> 'MarginEngine':
        data = self.to_dict()
        data['kind'] = EngineKind(kind).value
        return MarginEngine.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'maintenance_fraction': self.maintenance_fraction,
            'vol_coefficient': self.vol_coefficient,
            'ttr_coefficient': self.ttr_coefficient,
            'entry_distance_coefficient': self.entry_distance_coefficient,
            'vol_reference': self.vol_reference,
            'ttr_reference': self.ttr_reference,
            'vol_window': self.vol_window,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'MarginEngine':
        return cls(
            kind=data.get('kind', EngineKind.DYNAMIC_E2.value),
            maintenance_fraction=float(data.get('maintenance_fraction', MAINTENANCE_FRACTION)),
            vol_coefficient=float(data.get('vol_coefficient', VOL_COEFFICIENT)),
            ttr_coefficient=float(data.get('ttr_coefficient', TTR_COEFFICIENT)),
            entry_distance_coefficient=float(data.get('entry_distance_coefficient', ENTRY_DISTANCE_COEFFICIENT)),
            vol_reference=float(data.get('vol_reference', VOL_REFERENCE)),
            ttr_reference=int(data.get('ttr_reference', TTR_REFERENCE_TICKS)),
            vol_window=int(data.get('vol_window', VOL_WINDOW_TICKS)),
        )


@dataclass(frozen=True)
class MarginRequirement:
    """Requirement for one position at one tick, with its components"""

    static: float
    without_vol: float
    total: float
    vol_excess: float
    ttr_shrink: float
    entry_distance: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'static': self.static,
            'without_vol': self.without_vol,
            'total': self.total,
            'vol_excess': self.vol_excess,
            'ttr_shrink': self.ttr_shrink,
            'entry_distance': self.entry_distance,
        }
