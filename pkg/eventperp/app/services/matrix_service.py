"""
Channel-control matrix: the bundled dataset and queries over it
"""
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from eventperp.app.models import ChannelControlRow, LeverageEffect, ManipulationChannel
from eventperp.app.utils.errors import ConfigError, InvalidParameter

logger = logging.getLogger(__name__)

MATRIX_PATH = Path(__file__).resolve().parents[2] / 'data' / 'channel_control_matrix.json'
MATRIX_COLUMNS = [
    'channel', 'also_covers', 'channel_label', 'leverage_effect', 'leverage_effect_label',
    'detection_source', 'engine_control', 'regulatory_control', 'section_anchor',
]


@lru_cache(maxsize=None)
def _load(path: str) -> Tuple[ChannelControlRow, ...]:
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read channel-control matrix: {e}", source=path)
    rows = tuple(ChannelControlRow.from_dict(entry) for entry in data)

    covered = [channel for row in rows for channel in row.channels]
    if len(covered) != len(set(covered)):
        raise ConfigError("a channel appears in more than one matrix row", source=path)
    missing = set(ManipulationChannel) - set(covered)
    if missing:
        raise ConfigError(f"matrix rows missing for: {', '.join(sorted(c.value for c in missing))}", source=path)
    logger.debug(f"Loaded {len(rows)} channel-control rows from {path}")
    return rows


class MatrixService:
    """Read-only lookups over the channel-control dataset"""

    @staticmethod
    def rows(path: Optional[Path] = None) -> List[ChannelControlRow]:
        return list(_load(str(path or MATRIX_PATH)))

    @staticmethod
    def lookup(channel) -> ChannelControlRow:
        """Row covering a channel; total over every ManipulationChannel kind"""
        try:
            channel = ManipulationChannel(channel)
        except ValueError:
            raise InvalidParameter(f"unknown manipulation channel: {channel}")
        for row in MatrixService.rows():
            if channel in row.channels:
                return row
        raise InvalidParameter(f"no matrix row covers {channel.value}")

    @staticmethod
    def channels_by_effect(effect) -> List[ManipulationChannel]:
        """Primary channels of the rows tagged with `effect`, in dataset order"""
        try:
            effect = LeverageEffect(effect)
        except ValueError:
            raise InvalidParameter(f"unknown leverage effect: {effect}")
        return [row.channel for row in MatrixService.rows() if row.leverage_effect is effect]

    @staticmethod
    def to_frame() -> pd.DataFrame:
        records = []
        for row in MatrixService.rows():
            record = row.to_dict()
            record['also_covers'] = ';'.join(record['also_covers'])
            records.append(record)
        return pd.DataFrame(records, columns=MATRIX_COLUMNS)

    @staticmethod
    def to_json() -> str:
        return json.dumps([row.to_dict() for row in MatrixService.rows()], sort_keys=True, indent=2)
