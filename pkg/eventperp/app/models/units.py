"""
Value types for probabilities, money and leverage
"""
import math
from dataclasses import dataclass

from eventperp.app.utils.errors import InvalidParameter


def _finite(name: str, value) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameter(f"{name} must be a number, got {value!r}")
    if math.isnan(number):
        raise InvalidParameter(f"{name} must not be NaN")
    return number


@dataclass(frozen=True)
class Probability:
    """Dimensionless value in [0, 1]"""

    value: float

    def __post_init__(self):
        number = _finite('probability', self.value)
        if not 0.0 <= number <= 1.0:
            raise InvalidParameter(f"probability must lie in [0, 1], got {number}")
        object.__setattr__(self, 'value', number)

    @property
    def complement(self) -> float:
        return 1.0 - self.value

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class Money:
    """Non-negative USD amount"""

    amount: float

    def __post_init__(self):
        number = _finite('amount', self.amount)
        if number < 0 or math.isinf(number):
            raise InvalidParameter(f"amount must be a finite non-negative USD value, got {number}")
        object.__setattr__(self, 'amount', number)

    def __float__(self):
        return self.amount


@dataclass(frozen=True)
class Leverage:
    """Notional over collateral; 1 means fully collateralized"""

    value: float

    def __post_init__(self):
        number = _finite('leverage', self.value)
        if number < 1.0 or math.isinf(number):
            raise InvalidParameter(f"leverage must be a finite value >= 1, got {number}")
        object.__setattr__(self, 'value', number)

    def notional(self, collateral: Money) -> float:
        """N = L * C"""
        return self.value * collateral.amount

    def __float__(self):
        return self.value
