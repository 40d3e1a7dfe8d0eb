"""
Manipulation channels and the channel-to-controls matrix row
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple


class ManipulationChannel(str, Enum):
    """Ways a leveraged event venue can be manipulated"""
    # Market-price manipulation
    TRADE_BASED = 'TradeBased'
    SPOOF_WITHDRAW = 'SpoofWithdraw'
    INFORMATION_BASED = 'InformationBased'
    ORACLE_INDEX = 'OracleIndex'

    # Outcome manipulation
    OUTCOME_SPORTS = 'OutcomeSports'
    OUTCOME_SUB_NATIONAL_POLITICAL = 'OutcomeSubNationalPolitical'
    OUTCOME_LARGE_ELECTORATE = 'OutcomeLargeElectorate'
    OUTCOME_MACRO = 'OutcomeMacro'
    INFORMATION_RELEASE_TIMING = 'InformationReleaseTiming'

    # Informed trading
    INFORMED_TRADING_RENTS = 'InformedTradingRents'

    # Introduced by the margin and halt framework
    PRE_EMPTION = 'PreEmption'
    HALT_ARBITRAGE = 'HaltArbitrage'
    BAD_DEBT_SHIFTING = 'BadDebtShifting'

    @classmethod
    def for_event_class(cls, event_class: str) -> 'ManipulationChannel':
        """Outcome-manipulation channel of a scenario's event class"""
        try:
            return OUTCOME_CHANNELS[event_class]
        except KeyError:
            raise ValueError(f"unknown scenario event class {event_class!r}; "
                             f"expected one of {', '.join(OUTCOME_CHANNELS)}")


OUTCOME_CHANNELS = {
    'sports': ManipulationChannel.OUTCOME_SPORTS,
    'sub_national_political': ManipulationChannel.OUTCOME_SUB_NATIONAL_POLITICAL,
    'large_electorate': ManipulationChannel.OUTCOME_LARGE_ELECTORATE,
    'macro': ManipulationChannel.OUTCOME_MACRO,
    'information_release': ManipulationChannel.INFORMATION_RELEASE_TIMING,
}


class LeverageEffect(str, Enum):
    MULTIPLICATIVE = 'Multiplicative'
    THRESHOLD_SHIFTING = 'ThresholdShifting'
    NEGLIGIBLE = 'Negligible'
    FRAMEWORK_INTRODUCED = 'FrameworkIntroduced'
    MULTIPLICATIVE_PLUS_AMORTIZED = 'MultiplicativePlusAmortized'


@dataclass(frozen=True)
class ChannelControlRow:
    """One row of the channel-control matrix.

    `channel` is the row's primary channel; `also_covers` lists the channel
    kinds that share this row.
    """

    channel: ManipulationChannel
    leverage_effect: LeverageEffect
    channel_label: str
    leverage_effect_label: str
    detection_source: str
    engine_control: str
    regulatory_control: str
    section_anchor: str
    also_covers: Tuple[ManipulationChannel, ...] = field(default_factory=tuple)

    @property
    def channels(self) -> Tuple[ManipulationChannel, ...]:
        return (self.channel,) + self.also_covers

    def to_dict(self) -> Dict[str, Any]:
        return {
            'channel': self.channel.value,
            'also_covers': [c.value for c in self.also_covers],
            'channel_label': self.channel_label,
            'leverage_effect': self.leverage_effect.value,
            'leverage_effect_label': self.leverage_effect_label,
            'detection_source': self.detection_source,
            'engine_control': self.engine_control,
            'regulatory_control': self.regulatory_control,
            'section_anchor': self.section_anchor,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChannelControlRow':
        return cls(
            channel=ManipulationChannel(data['channel']),
            leverage_effect=LeverageEffect(data['leverage_effect']),
            channel_label=data['channel_label'],
            leverage_effect_label=data['leverage_effect_label'],
            detection_source=data['detection_source'],
            engine_control=data['engine_control'],
            regulatory_control=data['regulatory_control'],
            section_anchor=data['section_anchor'],
            also_covers=tuple(ManipulationChannel(c) for c in data.get('also_covers', [])),
        )
