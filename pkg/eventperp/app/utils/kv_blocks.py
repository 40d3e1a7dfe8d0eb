"""
Reader for the text key-value block format used by scenario files and run configs.

    # comment
    [scenario]
    label = A
    k_manip = 1e5

Block bodies are handed to python-dotenv, so quoting and inline comments follow
.env rules; this module only splits blocks and keeps line numbers for errors.
"""
import io
import re
from typing import Dict, List, Optional

from dotenv import dotenv_values

from .errors import ConfigError, EmptyInput

_HEADER = re.compile(r'^\s*\[(?P<name>[^\]]+)\]\s*(?:#.*)?$')
_BINDING = re.compile(r'^\s*(?:export\s+)?(?P<key>[^=#\s]+)\s*(?P<eq>=)?')


class KVBlock:
    """One `[name]` block with its values and the line each key came from"""

    def __init__(self, name: str, values: Dict[str, str], lines: Dict[str, int],
                 start_line: int, source: Optional[str] = None):
        self.name = name
        self.values = values
        self.lines = lines
        self.start_line = start_line
        self.source = source

    @property
    def kind(self) -> str:
        """First word of the header: `[agent longs]` -> `agent`"""
        return self.name.split()[0].lower()

    @property
    def label(self) -> Optional[str]:
        parts = self.name.split(maxsplit=1)
        return parts[1] if len(parts) > 1 else None

    def __contains__(self, key: str) -> bool:
        return key in self.values

    def line_of(self, key: str) -> int:
        return self.lines.get(key, self.start_line)

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(message, line=self.line_of(key), source=self.source)

    def get_str(self, key: str, default: Optional[str] = None, choices=None) -> Optional[str]:
        value = self.values.get(key)
        if value is None or value == '':
            return default
        if choices is not None and value.lower() not in choices:
            raise self.error(key, f"{key} must be one of {', '.join(choices)}, got {value!r}")
        return value.lower() if choices is not None else value

    def get_float(self, key: str, default: Optional[float] = None, required: bool = False) -> Optional[float]:
        value = self.values.get(key)
        if value is None or value == '':
            if required:
                raise ConfigError(f"missing required key {key!r} in [{self.name}]",
                                  line=self.start_line, source=self.source)
            return default
        try:
            return float(value)
        except ValueError:
            raise self.error(key, f"{key} is not a number: {value!r}")

    def get_int(self, key: str, default: Optional[int] = None, required: bool = False) -> Optional[int]:
        number = self.get_float(key, None if default is None else float(default), required)
        if number is None:
            return None
        if number != int(number):
            raise self.error(key, f"{key} must be an integer, got {self.values[key]!r}")
        return int(number)

    def get_bool(self, key: str, default: bool = False) -> bool:
        value = self.values.get(key)
        if value is None or value == '':
            return default
        return value.lower() == 'true'

    def get_float_list(self, key: str) -> Optional[List[float]]:
        value = self.values.get(key)
        if value is None or value == '':
            return None
        try:
            return [float(item.strip()) for item in value.split(',') if item.strip()]
        except ValueError:
            raise self.error(key, f"{key} must be a comma-separated list of numbers: {value!r}")

    def raw(self) -> Dict[str, str]:
        return dict(self.values)


def parse_blocks(text: str, source: Optional[str] = None) -> List[KVBlock]:
    """
    Split a key-value block file into blocks

    Args:
        text: File contents
        source: Name used in error messages (usually the path)

    Returns:
        Blocks in file order

    Raises:
        EmptyInput: no blocks at all
        ConfigError: malformed line, duplicate key, or key outside a block
    """
    blocks: List[KVBlock] = []
    current_name = None
    current_start = 0
    body: List[str] = []
    lines: Dict[str, int] = {}

    def close_block():
        if current_name is None:
            return
        parsed = dotenv_values(stream=io.StringIO('\n'.join(body)))
        values = {key.lower(): ('' if value is None else value) for key, value in parsed.items()}
        blocks.append(KVBlock(current_name, values, dict(lines), current_start, source))

    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue

        header = _HEADER.match(line)
        if header:
            close_block()
            current_name = header.group('name').strip()
            current_start = number
            body = []
            lines = {}
            continue

        binding = _BINDING.match(line)
        if not binding or not binding.group('eq'):
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line=number, source=source)
        if current_name is None:
            raise ConfigError("key outside of a [block]", line=number, source=source)

        key = binding.group('key').lower()
        if key in lines:
            raise ConfigError(f"duplicate key {key!r} in [{current_name}]", line=number, source=source)
        lines[key] = number
        body.append(line)

    close_block()

    if not blocks:
        raise EmptyInput("no blocks found", source=source)
    return blocks
