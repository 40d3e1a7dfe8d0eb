from .units import Probability, Money, Leverage
from .channel import ManipulationChannel, LeverageEffect, ChannelControlRow
from .scenario import (
    ManipulationScenario,
    ThresholdResult,
    Regime,
    GridPoint,
    SensitivityGrid,
    validate_scenario,
    GRID_COLUMNS,
    ScenarioEntry,
)
from .rent_profile import RentProfile, EngineOutcome, RentCompressionReport, RentEntry
from .market import MarketSpec, IndexPath, EventClass, HaltMode
from .ladder import DepthLadder, LadderSweep
from .position import Position, Side, CloseReason
from .margin_engine import MarginEngine, EngineKind, MarginRequirement
from .venue_event import VenueEvent, EventKind, EVENT_LOG_COLUMNS
from .venue_state import VenueState, SpoofOrder
from .agent import AgentSpec, AgentKind, Order
from .attack import (
    AttackReport,
    PreemptionParams,
    HaltArbitrageParams,
    BadDebtShiftParams,
    TradePushParams,
    SpoofParams,
    params_from_dict,
)
from .run_report import RunReport, RunManifest
from .run_config import RunConfig

__all__ = [
    'Probability', 'Money', 'Leverage',
    'ManipulationChannel', 'LeverageEffect', 'ChannelControlRow',
    'ManipulationScenario', 'ThresholdResult', 'Regime', 'GridPoint', 'SensitivityGrid',
    'validate_scenario', 'GRID_COLUMNS', 'ScenarioEntry',
    'RentProfile', 'EngineOutcome', 'RentCompressionReport', 'RentEntry',
    'MarketSpec', 'IndexPath', 'EventClass', 'HaltMode',
    'DepthLadder', 'LadderSweep',
    'Position', 'Side', 'CloseReason',
    'MarginEngine', 'EngineKind', 'MarginRequirement',
    'VenueEvent', 'EventKind', 'EVENT_LOG_COLUMNS',
    'VenueState', 'SpoofOrder',
    'AgentSpec', 'AgentKind', 'Order',
    'AttackReport', 'PreemptionParams', 'HaltArbitrageParams', 'BadDebtShiftParams',
    'TradePushParams', 'SpoofParams', 'params_from_dict',
    'RunReport', 'RunManifest', 'RunConfig',
]
