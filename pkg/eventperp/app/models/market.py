"""
Market specification and index path
"""
import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Sequence

from eventperp.app.utils.errors import InvalidParameter
from eventperp.config.settings import FINAL_WINDOW_TICKS, START_INDEX


class EventClass(str, Enum):
    SPORTS = 'sports'
    POLITICS = 'politics'
    CRYPTO = 'crypto'
    OTHER = 'other'


class HaltMode(str, Enum):
    """What the resolution-zone halt does to open positions"""
    CLOSE_AT_INDEX = 'close_at_index'
    FREEZE_TO_ORACLE = 'freeze_to_oracle'


@dataclass(frozen=True)
class MarketSpec:
    """
    One binary event-linked perpetual.

    resolution_time is tau in ticks; halt_offset 0 disables the halt.
    terminal_jump_reference is the expected |outcome - pre-resolution index|.
    """

    resolution_time: int
    outcome: int
    halt_offset: int = 0
    terminal_jump_reference: float = 0.5
    event_class: EventClass = EventClass.OTHER
    start_index: float = START_INDEX
    halt_mode: HaltMode = HaltMode.CLOSE_AT_INDEX
    final_window_ticks: int = FINAL_WINDOW_TICKS

    def __post_init__(self):
        if int(self.resolution_time) != self.resolution_time or self.resolution_time < 1:
            raise InvalidParameter(f"resolution_time must be a positive integer, got {self.resolution_time}")
        if self.outcome not in (0, 1):
            raise InvalidParameter(f"outcome must be 0 or 1, got {self.outcome}")
        if self.halt_offset < 0 or self.halt_offset >= self.resolution_time:
            raise InvalidParameter(
                f"halt_offset must satisfy 0 <= halt_offset < resolution_time, got {self.halt_offset}"
            )
        if not 0.0 <= self.terminal_jump_reference <= 1.0:
            raise InvalidParameter("terminal_jump_reference must lie in [0, 1]")
        if not 0.0 < self.start_index < 1.0:
            raise InvalidParameter(f"start_index must lie strictly inside (0, 1), got {self.start_index}")
        if self.final_window_ticks < 0 or self.final_window_ticks > self.resolution_time:
            raise InvalidParameter("final_window_ticks must lie in [0, resolution_time]")
        object.__setattr__(self, 'event_class', EventClass(self.event_class))
        object.__setattr__(self, 'halt_mode', HaltMode(self.halt_mode))

    @property
    def halt_tick(self) -> int:
        """Tick at which the halt fires; resolution_time when there is none"""
        return self.resolution_time - self.halt_offset

    @property
    def has_halt(self) -> bool:
        return self.halt_offset > 0

    @property
    def final_window_start(self) -> int:
        if self.has_halt:
            return self.halt_tick
        return self.resolution_time - self.final_window_ticks

    def with_halt(self, halt_offset: int) -> 'MarketSpec':
        data = self.to_dict()
        data['halt_offset'] = halt_offset
        return MarketSpec.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'resolution_time': self.resolution_time,
            'outcome': self.outcome,
            'halt_offset': self.halt_offset,
            'terminal_jump_reference': self.terminal_jump_reference,
            'event_class': self.event_class.value,
            'start_index': self.start_index,
            'halt_mode': self.halt_mode.value,
            'final_window_ticks': self.final_window_ticks,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'MarketSpec':
        return cls(
            resolution_time=int(data['resolution_time']),
            outcome=int(data['outcome']),
            halt_offset=int(data.get('halt_offset', 0)),
            terminal_jump_reference=float(data.get('terminal_jump_reference', 0.5)),
            event_class=data.get('event_class', EventClass.OTHER.value),
            start_index=float(data.get('start_index', START_INDEX)),
            halt_mode=data.get('halt_mode', HaltMode.CLOSE_AT_INDEX.value),
            final_window_ticks=int(data.get('final_window_ticks', FINAL_WINDOW_TICKS)),
        )


@dataclass(frozen=True)
class IndexPath:
    """Exogenous index values for ticks 0..tau; the value at tau is the outcome"""

    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise InvalidParameter("index path must not be empty")
        if any(v < 0.0 or v > 1.0 for v in values):
            raise InvalidParameter("index path values must lie in [0, 1]")
        if values[-1] not in (0.0, 1.0):
            raise InvalidParameter("index path must end at 0 or 1")
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, tick: int) -> float:
        return self.values[tick]

    @property
    def resolution_time(self) -> int:
        return len(self.values) - 1

    @property
    def terminal_jump(self) -> float:
        """|outcome - I_{tau-1}|"""
        if len(self.values) < 2:
            return 0.0
        return abs(self.values[-1] - self.values[-2])

    def digest(self) -> str:
        payload = json.dumps(list(self.values)).encode('utf-8')
        return hashlib.sha256(payload).hexdigest()

    def to_list(self) -> List[float]:
        return list(self.values)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> 'IndexPath':
        return cls(tuple(values))
