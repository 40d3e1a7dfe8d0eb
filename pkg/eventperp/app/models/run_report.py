"""
Run report and run manifest models
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from eventperp.app.models.attack import AttackReport
from eventperp.app.models.venue_event import EVENT_LOG_COLUMNS, EventKind, VenueEvent


@dataclass
class RunReport:
    """Everything one deterministic venue episode produced"""

    seed: int
    market: Dict[str, Any]
    engine: Dict[str, Any]
    path_digest: str
    index_values: List[float]
    liquidations_total: int
    liquidations_final_window: int
    final_window_start: int
    bad_debt_total: float
    pool_initial: float
    pool_final: float
    uncovered_bad_debt: float
    agent_pnl: Dict[str, float]
    ledger_residual: float
    halt_price: Optional[float] = None
    pre_resolution_index: Optional[float] = None
    positions: List[Dict[str, Any]] = field(default_factory=list)
    events: List[VenueEvent] = field(default_factory=list)
    attack: Optional[AttackReport] = None

    @property
    def pool_drawdown(self) -> float:
        return self.pool_initial - self.pool_final

    @property
    def pool_delta(self) -> float:
        return self.pool_final - self.pool_initial

    @property
    def engine_kind(self) -> str:
        return self.engine.get('kind')

    @property
    def halt_offset(self) -> int:
        return self.market.get('halt_offset', 0)

    @property
    def resolution_time(self) -> int:
        return self.market['resolution_time']

    def liquidations_since(self, tick: int) -> int:
        return sum(1 for event in self.events if event.kind == EventKind.LIQUIDATION and event.tick >= tick)

    def pnl_of(self, agent_id: str) -> float:
        return self.agent_pnl.get(agent_id, 0.0)

    def count(self, kind, agent_id: Optional[str] = None) -> int:
        return sum(
            1 for event in self.events
            if event.kind == kind and (agent_id is None or event.agent_id == agent_id)
        )

    def to_dict(self, include_events: bool = True) -> Dict[str, Any]:
        data = {
            'seed': self.seed,
            'market': dict(self.market),
            'engine': dict(self.engine),
            'path_digest': self.path_digest,
            'index_values': list(self.index_values),
            'liquidations_total': self.liquidations_total,
            'liquidations_final_window': self.liquidations_final_window,
            'final_window_start': self.final_window_start,
            'bad_debt_total': self.bad_debt_total,
            'pool_initial': self.pool_initial,
            'pool_final': self.pool_final,
            'pool_drawdown': self.pool_drawdown,
            'uncovered_bad_debt': self.uncovered_bad_debt,
            'agent_pnl': dict(self.agent_pnl),
            'ledger_residual': self.ledger_residual,
            'halt_price': self.halt_price,
            'pre_resolution_index': self.pre_resolution_index,
            'positions': list(self.positions),
            'attack': self.attack.to_dict() if self.attack else None,
        }
        if include_events:
            data['events'] = [event.to_dict() for event in self.events]
        return data

    def to_json(self, include_events: bool = True) -> str:
        return json.dumps(self.to_dict(include_events), sort_keys=True, indent=2)

    def events_frame(self) -> pd.DataFrame:
        return pd.DataFrame([event.to_row() for event in self.events], columns=EVENT_LOG_COLUMNS)


@dataclass
class RunManifest:
    """What a command read and wrote, with hashes of every output"""

    command: str
    config_path: Optional[str]
    seeds: List[int]
    output_paths: List[str]
    artifact_version: str
    output_hashes: Dict[str, str] = field(default_factory=dict)
    content_hash: str = ''
    parameters: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'config_path': self.config_path,
            'seeds': list(self.seeds),
            'output_paths': list(self.output_paths),
            'artifact_version': self.artifact_version,
            'output_hashes': dict(self.output_hashes),
            'content_hash': self.content_hash,
            'parameters': dict(self.parameters),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
