"""
Error kinds raised across the toolkit.

Every error carries the CLI exit code and the HTTP status it maps to, so the
command group and the blueprints translate failures the same way.
"""
from typing import Optional


class EventPerpError(Exception):
    """Base class for all domain errors"""

    exit_code = 1
    http_status = 400

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_dict(self):
        return {'error': self.message, 'kind': type(self).__name__}


class InvalidParameter(EventPerpError, ValueError):
    """A numeric input violates its type invariant"""


class DegenerateProbability(InvalidParameter):
    """pi_yes too close to 1 for the threshold formula"""


class ZeroCapital(InvalidParameter):
    pass


class MissingLeverage(InvalidParameter):
    pass


class DegenerateVolatility(InvalidParameter):
    pass


class ZeroRent(InvalidParameter):
    pass


class VenueSettled(EventPerpError):
    """Stepping a venue that has already settled or passed resolution"""

    http_status = 409


class AlreadySettled(VenueSettled):
    pass


class InsufficientDepth(EventPerpError):
    """A push asked for more move than the ladder can deliver"""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class MismatchedRuns(EventPerpError):
    pass


class ConfigError(EventPerpError):
    """Malformed scenario or run config file"""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        location = ''
        if source:
            location = f"{source}:"
        if line is not None:
            location = f"{location}{line}: "
        elif location:
            location = f"{location} "
        super().__init__(f"{location}{message}")
        self.line = line
        self.source = source


class EmptyInput(ConfigError):
    pass


class InvariantViolation(EventPerpError):
    """An internal invariant failed during a run; signals a bug"""

    exit_code = 2
    http_status = 500
