"""
Shape checks for JSON request fields
"""
from typing import Any, Dict, List

from eventperp.app.utils.errors import ConfigError


def require_object(value: Any, name: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a JSON object")
    return value


def require_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def require_numbers(value: Any, name: str) -> List[float]:
    """A non-empty JSON array of numbers"""
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of numbers")
    return [require_number(item, f"{name}[{i}]") for i, item in enumerate(value)]
