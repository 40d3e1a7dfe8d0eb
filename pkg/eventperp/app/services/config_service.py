"""
Scenario files, rent profiles and run configs: key-value block files into models
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from eventperp.app.models import (
    AgentSpec,
    DepthLadder,
    MarginEngine,
    MarketSpec,
    RentEntry,
    RentProfile,
    RunConfig,
    ScenarioEntry,
    params_from_dict,
    validate_scenario,
)
from eventperp.app.services.costbenefit_service import SWEEP_AXES
from eventperp.app.utils import KVBlock, parse_blocks
from eventperp.app.utils.errors import ConfigError, EventPerpError
from eventperp.config.settings import (
    AGENT_KINDS,
    ATTACK_CHANNELS,
    ENGINE_KINDS,
    EVENT_CLASSES,
    HALT_MODES,
)

logger = logging.getLogger(__name__)

SCENARIO_KEYS = {'label', 'k_manip', 'capital', 'pi_yes', 'p_detected', 'penalty_factor', 'leverage',
                 'event_class', 'band_low', 'band_high', 'note'} | {f"{name}_axis" for name, _ in SWEEP_AXES}

RENT_KEYS = {'rent_per_event', 'return_volatility', 'detection_cost', 'capital', 'funding_cost', 'leverages'}

RUN_BLOCK_KEYS = {
    'market': {'resolution_time', 'outcome', 'halt_offset', 'halt_mode', 'terminal_jump_reference',
               'event_class', 'start_index', 'final_window_ticks'},
    'path': {'volatility', 'hold_final_ticks'},
    'engine': {'kind', 'maintenance_fraction', 'vol_coefficient', 'ttr_coefficient',
               'entry_distance_coefficient', 'vol_reference', 'ttr_reference', 'vol_window'},
    'ladder': {'offsets_bps', 'quantities', 'boundary_depth_ratio', 'boundary_band'},
    'venue': {'pool_fraction', 'impact_persistence'},
    'agent': {'kind', 'side', 'notional', 'leverage', 'count', 'open_tick', 'counterparty',
              'counterparty_leverage', 'quantity', 'activity', 'start_tick', 'ticks'},
    'attack': None,
    'run': {'seed', 'reps', 'engines', 'halt_offsets'},
}


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read file: {e.strerror}", source=str(path))


def _check_keys(block: KVBlock, allowed):
    if allowed is None:
        return
    for key in block.values:
        if key not in allowed:
            raise block.error(key, f"unknown key {key!r} in [{block.name}]")


def _model(block: KVBlock, build):
    """Run a model constructor, reporting validation failures at the block's line"""
    try:
        return build()
    except ConfigError:
        raise
    except EventPerpError as e:
        raise ConfigError(f"[{block.name}] {e.message}", line=block.start_line, source=block.source)
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"[{block.name}] invalid or missing value: {e}", line=block.start_line,
                          source=block.source)


class ConfigService:
    """Parses the text formats the CLI and the HTTP surface accept"""

    @staticmethod
    def parse_scenarios(text: str, source: Optional[str] = None) -> List[ScenarioEntry]:
        """
        Read `[scenario <label>]` blocks

        A block whose values do not validate becomes an entry with `error` set,
        so one bad row never hides the others. Structural problems (unknown
        keys, malformed lines) raise ConfigError.

        Raises:
            EmptyInput: the file holds no blocks
            ConfigError: structural errors, with the line number
        """
        entries: List[ScenarioEntry] = []
        for block in parse_blocks(text, source):
            if block.kind != 'scenario':
                raise ConfigError(f"unexpected block [{block.name}]; expected [scenario <label>]",
                                  line=block.start_line, source=source)
            _check_keys(block, SCENARIO_KEYS)
            label = block.get_str('label') or block.label or f"line {block.start_line}"

            axes: Dict[str, List[float]] = {}
            for name, _ in SWEEP_AXES:
                values = block.get_float_list(f"{name}_axis")
                if values is not None:
                    axes[name] = values
            low = block.get_float('band_low')
            high = block.get_float('band_high')
            band = (low, high) if low is not None else None

            raw: Dict[str, Any] = {name: block.get_float(name) for name, _ in SWEEP_AXES}
            raw['leverage'] = block.get_float('leverage')
            raw['label'] = label
            event_class = block.get_str('event_class')
            raw['event_class'] = event_class.lower() if event_class else None

            entry = ScenarioEntry(label=label, line=block.start_line, axes=axes, band=band,
                                  note=block.get_str('note', ''))
            try:
                entry.scenario = validate_scenario(raw)
            except EventPerpError as e:
                entry.error = f"{source or '<input>'}:{block.start_line}: {e.message}"
                logger.warning(f"Scenario {label} is invalid: {entry.error}")
            entries.append(entry)
        return entries

    @staticmethod
    def load_scenarios(path: Union[str, Path]) -> List[ScenarioEntry]:
        return ConfigService.parse_scenarios(_read(path), str(path))

    @staticmethod
    def parse_rent_profiles(text: str, source: Optional[str] = None) -> List[RentEntry]:
        """
        Read `[rent <label>]` blocks

        Raises:
            EmptyInput: the file holds no blocks
            ConfigError: unknown block or key, missing or invalid value, with the line number
        """
        entries: List[RentEntry] = []
        for block in parse_blocks(text, source):
            if block.kind != 'rent':
                raise ConfigError(f"unexpected block [{block.name}]; expected [rent <label>]",
                                  line=block.start_line, source=source)
            _check_keys(block, RENT_KEYS)
            values = {
                'unleveraged_rent_per_event': block.get_float('rent_per_event', required=True),
                'return_volatility': block.get_float('return_volatility', required=True),
                'detection_cost': block.get_float('detection_cost', default=0.0),
                'capital': block.get_float('capital', required=True),
            }
            profile = _model(block, lambda: RentProfile.from_dict(values))
            entries.append(RentEntry(
                label=block.label or f"line {block.start_line}",
                line=block.start_line,
                profile=profile,
                funding_cost_per_event=block.get_float('funding_cost', default=0.0),
                leverages=tuple(block.get_float_list('leverages') or ()),
            ))
        return entries

    @staticmethod
    def load_rent_profiles(path: Union[str, Path]) -> List[RentEntry]:
        return ConfigService.parse_rent_profiles(_read(path), str(path))

    @staticmethod
    def parse_run_config(text: str, source: Optional[str] = None) -> RunConfig:
        """
        Read a run config: [market] (required), [path], [engine], [ladder],
        [venue], any number of [agent <id>], optionally [attack] and [run]

        Raises:
            EmptyInput: the file holds no blocks
            ConfigError: unknown block or key, duplicate block, invalid value
        """
        blocks = parse_blocks(text, source)
        single: Dict[str, KVBlock] = {}
        agent_blocks: List[KVBlock] = []
        for block in blocks:
            if block.kind not in RUN_BLOCK_KEYS:
                raise ConfigError(f"unknown block [{block.name}]", line=block.start_line, source=source)
            _check_keys(block, RUN_BLOCK_KEYS[block.kind])
            if block.kind == 'agent':
                agent_blocks.append(block)
            elif block.kind in single:
                raise ConfigError(f"duplicate block [{block.name}]", line=block.start_line, source=source)
            else:
                single[block.kind] = block

        if 'market' not in single:
            raise ConfigError("run config needs a [market] block", source=source)

        market_block = single['market']
        market = _model(market_block, lambda: MarketSpec.from_dict(_market_values(market_block)))

        engine = MarginEngine()
        if 'engine' in single:
            block = single['engine']
            values = {key: value for key, value in block.raw().items() if value != ''}
            block.get_str('kind', choices=ENGINE_KINDS)
            engine = _model(block, lambda: MarginEngine.from_dict(values))

        ladder = DepthLadder()
        if 'ladder' in single:
            block = single['ladder']
            ladder = _model(block, lambda: _ladder(block))

        agents = []
        for block in agent_blocks:
            if not block.label:
                raise ConfigError("agent block needs an id: [agent <id>]", line=block.start_line, source=source)
            block.get_str('kind', choices=AGENT_KINDS)
            values = {key: value for key, value in block.raw().items() if value != ''}
            values['agent_id'] = block.label
            if 'kind' not in values:
                raise block.error('kind', f"[{block.name}] needs a kind")
            agents.append(_model(block, lambda: AgentSpec.from_dict(values)))

        options: Dict[str, Any] = {}
        if 'path' in single:
            block = single['path']
            options['volatility'] = block.get_float('volatility', default=None)
            options['hold_final_ticks'] = block.get_int('hold_final_ticks', default=0)
        if 'venue' in single:
            block = single['venue']
            options['pool_fraction'] = block.get_float('pool_fraction')
            options['impact_persistence'] = block.get_float('impact_persistence')
        if 'run' in single:
            block = single['run']
            options['seed'] = block.get_int('seed', default=0)
            options['reps'] = block.get_int('reps', default=1)
            engines = block.get_str('engines')
            if engines:
                kinds = [kind.strip().lower() for kind in engines.split(',') if kind.strip()]
                for kind in kinds:
                    if kind not in ENGINE_KINDS:
                        raise block.error('engines', f"engines must be drawn from {', '.join(ENGINE_KINDS)}")
                options['engines'] = tuple(kinds)
            offsets = block.get_float_list('halt_offsets')
            if offsets is not None:
                options['halt_offsets'] = tuple(int(offset) for offset in offsets)
        if 'attack' in single:
            block = single['attack']
            channel = block.get_str('channel', choices=ATTACK_CHANNELS)
            if channel is None:
                raise ConfigError("[attack] needs a channel", line=block.start_line, source=source)
            values = {key: value for key, value in block.raw().items() if key != 'channel'}
            options['attack_channel'] = channel
            options['attack_params'] = _model(block, lambda: params_from_dict(channel, values))

        options = {key: value for key, value in options.items() if value is not None}
        run_block = single.get('run', market_block)
        config = _model(run_block, lambda: RunConfig(market=market, engine=engine, ladder=ladder,
                                                     agents=tuple(agents), **options))
        logger.debug(f"Loaded run config {source or '<input>'}: {len(agents)} agents, "
                     f"engine {engine.kind.value}, attack {config.attack_channel}")
        return config

    @staticmethod
    def load_run_config(path: Union[str, Path]) -> RunConfig:
        return ConfigService.parse_run_config(_read(path), str(path))

    @staticmethod
    def run_config_from_dict(data: Mapping[str, Any]) -> RunConfig:
        """Build a RunConfig from the JSON body the HTTP surface accepts"""
        if 'market' not in data:
            raise ConfigError("run config needs a market object")
        attack = data.get('attack') or {}
        channel = attack.get('channel')
        if channel is not None and channel not in ATTACK_CHANNELS:
            raise ConfigError(f"attack channel must be one of {', '.join(ATTACK_CHANNELS)}")
        try:
            options = {key: data[key] for key in ('volatility', 'hold_final_ticks', 'pool_fraction',
                                                  'impact_persistence', 'seed', 'reps') if key in data}
            return RunConfig(
                market=MarketSpec.from_dict(data['market']),
                engine=MarginEngine.from_dict(data.get('engine') or {}),
                ladder=DepthLadder.from_dict(data.get('ladder') or {}),
                agents=tuple(AgentSpec.from_dict(agent) for agent in data.get('agents', [])),
                attack_channel=channel,
                attack_params=params_from_dict(channel, attack) if channel else None,
                engines=tuple(data.get('engines', ())),
                halt_offsets=tuple(data.get('halt_offsets', ())),
                **options,
            )
        except EventPerpError:
            raise
        except (KeyError, ValueError, TypeError) as e:
            raise ConfigError(f"invalid or missing value: {e}")


def _market_values(block: KVBlock) -> Dict[str, Any]:
    values = {key: value for key, value in block.raw().items() if value != ''}
    block.get_str('halt_mode', choices=HALT_MODES)
    block.get_str('event_class', choices=EVENT_CLASSES)
    for key in ('halt_mode', 'event_class'):
        if key in values:
            values[key] = values[key].lower()
    for key in ('resolution_time', 'outcome', 'halt_offset', 'final_window_ticks'):
        if key in values:
            values[key] = block.get_int(key)
    return values


def _ladder(block: KVBlock) -> DepthLadder:
    data: Dict[str, Any] = {}
    offsets = block.get_float_list('offsets_bps')
    quantities = block.get_float_list('quantities')
    if offsets is not None:
        data['offsets_bps'] = offsets
    if quantities is not None:
        data['quantities'] = quantities
    for key in ('boundary_depth_ratio', 'boundary_band'):
        value = block.get_float(key)
        if value is not None:
            data[key] = value
    return DepthLadder.from_dict(data)
