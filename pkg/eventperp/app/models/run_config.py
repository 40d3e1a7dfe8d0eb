"""
Run configuration model: one market, one engine, a roster and an optional attack
"""
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from eventperp.app.models.agent import AgentSpec
from eventperp.app.models.ladder import DepthLadder
from eventperp.app.models.margin_engine import MarginEngine
from eventperp.app.models.market import MarketSpec
from eventperp.app.utils.errors import InvalidParameter
from eventperp.config.settings import (
    IMPACT_PERSISTENCE,
    INDEX_VOLATILITY,
    LIQUIDITY_PROVIDER_ID,
    POOL_FRACTION,
)


@dataclass(frozen=True)
class RunConfig:
    market: MarketSpec
    engine: MarginEngine = field(default_factory=MarginEngine)
    ladder: DepthLadder = field(default_factory=DepthLadder)
    agents: Tuple[AgentSpec, ...] = ()
    volatility: float = INDEX_VOLATILITY
    hold_final_ticks: int = 0
    pool_fraction: float = POOL_FRACTION
    impact_persistence: float = IMPACT_PERSISTENCE
    seed: int = 0
    reps: int = 1
    attack_channel: Optional[str] = None
    attack_params: Any = None
    engines: Tuple[str, ...] = ()
    halt_offsets: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'agents', tuple(self.agents))
        object.__setattr__(self, 'engines', tuple(self.engines))
        object.__setattr__(self, 'halt_offsets', tuple(int(h) for h in self.halt_offsets))
        ids = [agent.agent_id for agent in self.agents]
        if len(ids) != len(set(ids)):
            raise InvalidParameter("agent ids must be unique")
        if LIQUIDITY_PROVIDER_ID in ids:
            raise InvalidParameter(f"agent id {LIQUIDITY_PROVIDER_ID} is reserved for the liquidity provider")
        if self.pool_fraction < 0:
            raise InvalidParameter("pool_fraction must be >= 0")
        if not 0.0 <= self.impact_persistence <= 1.0:
            raise InvalidParameter("impact_persistence must lie in [0, 1]")
        if not 0 <= self.hold_final_ticks <= self.market.resolution_time:
            raise InvalidParameter("hold_final_ticks must lie in [0, resolution_time]")
        if self.reps < 1:
            raise InvalidParameter("reps must be >= 1")
        if (self.attack_channel is None) != (self.attack_params is None):
            raise InvalidParameter("an attack needs both a channel and its parameters")

    @property
    def seeds(self) -> Tuple[int, ...]:
        return tuple(range(self.seed, self.seed + self.reps))

    def variants(self) -> List['RunConfig']:
        """One config per (engine, halt offset) comparison cell; just self when none are listed"""
        engines = [self.engine.as_kind(kind) for kind in self.engines] or [self.engine]
        markets = [self.market.with_halt(offset) for offset in self.halt_offsets] or [self.market]
        return [replace(self, engine=engine, market=market, engines=(), halt_offsets=())
                for engine in engines for market in markets]

    def with_engine(self, engine: MarginEngine) -> 'RunConfig':
        return replace(self, engine=engine)

    def with_market(self, market: MarketSpec) -> 'RunConfig':
        return replace(self, market=market)

    def with_agents(self, agents) -> 'RunConfig':
        return replace(self, agents=tuple(agents))

    def without_attack(self) -> 'RunConfig':
        return replace(self, attack_channel=None, attack_params=None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'market': self.market.to_dict(),
            'engine': self.engine.to_dict(),
            'ladder': self.ladder.to_dict(),
            'agents': [agent.to_dict() for agent in self.agents],
            'volatility': self.volatility,
            'hold_final_ticks': self.hold_final_ticks,
            'pool_fraction': self.pool_fraction,
            'impact_persistence': self.impact_persistence,
            'seed': self.seed,
            'reps': self.reps,
            'attack_channel': self.attack_channel,
            'attack_params': self.attack_params.to_dict() if self.attack_params is not None else None,
            'engines': list(self.engines),
            'halt_offsets': list(self.halt_offsets),
        }
