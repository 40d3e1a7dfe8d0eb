from .errors import (
    EventPerpError,
    InvalidParameter,
    DegenerateProbability,
    ZeroCapital,
    MissingLeverage,
    DegenerateVolatility,
    ZeroRent,
    VenueSettled,
    AlreadySettled,
    InsufficientDepth,
    MismatchedRuns,
    ConfigError,
    EmptyInput,
    InvariantViolation,
)
from .kv_blocks import KVBlock, parse_blocks

__all__ = [
    'EventPerpError',
    'InvalidParameter',
    'DegenerateProbability',
    'ZeroCapital',
    'MissingLeverage',
    'DegenerateVolatility',
    'ZeroRent',
    'VenueSettled',
    'AlreadySettled',
    'InsufficientDepth',
    'MismatchedRuns',
    'ConfigError',
    'EmptyInput',
    'InvariantViolation',
    'KVBlock',
    'parse_blocks',
]
