"""
Order-book-lite depth ladder with piecewise-linear price impact

Each side rests quantity in buckets between fixed offsets from mid. Depth is
spread uniformly inside a bucket, so the price moves linearly in executed
quantity within a bucket (Kyle lambda = 1 / bucket density). Quantities are
contracts paying 1 USD on YES; prices and moves are probabilities.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple

from eventperp.app.utils.errors import InvalidParameter
from eventperp.config.settings import (
    BOUNDARY_BAND,
    BOUNDARY_DEPTH_RATIO,
    LADDER_OFFSETS_BPS,
    LADDER_QUANTITIES,
)

BPS = 1e-4


@dataclass(frozen=True)
class LadderSweep:
    """Result of walking one side of the ladder.

    move is signed (positive when buying pushes the index up); cost is the
    impact paid relative to the pre-trade mid and is never negative.
    """

    direction: int
    quantity: float
    move: float
    cost: float
    filled: bool
    boundary: bool

    @property
    def cost_per_bp(self) -> float:
        moved_bps = abs(self.move) / BPS
        return self.cost / moved_bps if moved_bps > 0 else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'direction': self.direction,
            'quantity': self.quantity,
            'move': self.move,
            'cost': self.cost,
            'filled': self.filled,
            'boundary': self.boundary,
        }


@dataclass(frozen=True)
class DepthLadder:
    """Symmetric per-side resting depth, deeper by boundary_depth_ratio near 0 and 1"""

    offsets_bps: Tuple[float, ...] = tuple(LADDER_OFFSETS_BPS)
    quantities: Tuple[float, ...] = tuple(LADDER_QUANTITIES)
    boundary_depth_ratio: float = BOUNDARY_DEPTH_RATIO
    boundary_band: float = BOUNDARY_BAND

    def __post_init__(self):
        offsets = tuple(float(o) for o in self.offsets_bps)
        quantities = tuple(float(q) for q in self.quantities)
        if not offsets or len(offsets) != len(quantities):
            raise InvalidParameter("ladder needs one quantity per offset bucket")
        if any(o <= 0 for o in offsets) or any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise InvalidParameter("ladder offsets must be positive and strictly increasing")
        if any(q < 0 or math.isinf(q) for q in quantities):
            raise InvalidParameter("ladder quantities must be finite and >= 0")
        if self.boundary_depth_ratio <= 0:
            raise InvalidParameter("boundary_depth_ratio must be > 0")
        if not 0.0 <= self.boundary_band < 0.5:
            raise InvalidParameter("boundary_band must lie in [0, 0.5)")
        object.__setattr__(self, 'offsets_bps', offsets)
        object.__setattr__(self, 'quantities', quantities)

    @property
    def max_move(self) -> float:
        """Largest move one side can absorb, in probability units"""
        return self.offsets_bps[-1] * BPS

    def in_boundary_band(self, index: float) -> bool:
        return min(index, 1.0 - index) < self.boundary_band

    def depth_multiplier(self, index: float) -> float:
        return self.boundary_depth_ratio if self.in_boundary_band(index) else 1.0

    def side_depth(self, index: float) -> float:
        multiplier = self.depth_multiplier(index)
        return sum(q * multiplier for q in self.quantities)

    def bucket_for_offset(self, offset_bps: float) -> int:
        """Index of the bucket holding a price offset; raises if outside the ladder"""
        if offset_bps < 0 or offset_bps > self.offsets_bps[-1]:
            raise InvalidParameter(
                f"offset {offset_bps}bp lies outside the ladder range (0, {self.offsets_bps[-1]}]"
            )
        for bucket, edge in enumerate(self.offsets_bps):
            if offset_bps <= edge:
                return bucket
        return len(self.offsets_bps) - 1

    def _segments(self, index: float) -> List[Tuple[float, float, float]]:
        multiplier = self.depth_multiplier(index)
        segments = []
        start = 0.0
        for edge_bps, quantity in zip(self.offsets_bps, self.quantities):
            end = edge_bps * BPS
            segments.append((start, end, quantity * multiplier / (end - start)))
            start = end
        return segments

    def sweep_quantity(self, index: float, quantity: float, direction: int) -> LadderSweep:
        """Execute `quantity` contracts against the side opposite `direction`"""
        remaining = float(quantity)
        move = 0.0
        cost = 0.0
        for start, end, density in self._segments(index):
            if remaining <= 0:
                break
            available = density * (end - start)
            if remaining >= available:
                remaining -= available
                cost += density * (end * end - start * start) / 2.0
                move = end
            else:
                reached = start + remaining / density
                cost += density * (reached * reached - start * start) / 2.0
                move = reached
                remaining = 0.0
        filled = remaining <= 0
        return LadderSweep(
            direction=direction,
            quantity=float(quantity) - max(remaining, 0.0),
            move=direction * move,
            cost=cost,
            filled=filled,
            boundary=self.in_boundary_band(index),
        )

    def sweep_move(self, index: float, move: float) -> LadderSweep:
        """Quantity and cost needed to move the price by `move` (signed)"""
        direction = 1 if move >= 0 else -1
        target = abs(move)
        quantity = 0.0
        cost = 0.0
        reached = 0.0
        for start, end, density in self._segments(index):
            if reached >= target:
                break
            stop = min(end, target)
            quantity += density * (stop - start)
            cost += density * (stop * stop - start * start) / 2.0
            reached = stop
        return LadderSweep(
            direction=direction,
            quantity=quantity,
            move=direction * reached,
            cost=cost,
            filled=reached >= target,
            boundary=self.in_boundary_band(index),
        )

    def sweep_cost(self, index: float, budget: float, direction: int) -> LadderSweep:
        """Largest move an impact budget buys in `direction`"""
        remaining = float(budget)
        quantity = 0.0
        cost = 0.0
        move = 0.0
        for start, end, density in self._segments(index):
            if remaining <= 0:
                break
            full_cost = density * (end * end - start * start) / 2.0
            if density == 0 or remaining >= full_cost:
                remaining -= full_cost
                cost += full_cost
                quantity += density * (end - start)
                move = end
                continue
            reached = math.sqrt(start * start + 2.0 * remaining / density)
            quantity += density * (reached - start)
            cost += remaining
            move = reached
            remaining = 0.0
        return LadderSweep(
            direction=direction,
            quantity=quantity,
            move=direction * move,
            cost=cost,
            filled=remaining <= 0,
            boundary=self.in_boundary_band(index),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'offsets_bps': list(self.offsets_bps),
            'quantities': list(self.quantities),
            'boundary_depth_ratio': self.boundary_depth_ratio,
            'boundary_band': self.boundary_band,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'DepthLadder':
        return cls(
            offsets_bps=tuple(data.get('offsets_bps', LADDER_OFFSETS_BPS)),
            quantities=tuple(data.get('quantities', LADDER_QUANTITIES)),
            boundary_depth_ratio=float(data.get('boundary_depth_ratio', BOUNDARY_DEPTH_RATIO)),
            boundary_band=float(data.get('boundary_band', BOUNDARY_BAND)),
        )
