"""
Tests for the channel-control matrix dataset and its queries
"""
import json

import pytest

from eventperp.app.models import LeverageEffect, ManipulationChannel
from eventperp.app.services import MatrixService
from eventperp.app.utils.errors import InvalidParameter
from tests.conftest import GOLDEN_DIR


class TestLookup:

    @pytest.mark.parametrize('channel,effect', [
        (ManipulationChannel.OUTCOME_SPORTS, LeverageEffect.THRESHOLD_SHIFTING),
        (ManipulationChannel.PRE_EMPTION, LeverageEffect.FRAMEWORK_INTRODUCED),
        (ManipulationChannel.OUTCOME_MACRO, LeverageEffect.NEGLIGIBLE),
        (ManipulationChannel.INFORMED_TRADING_RENTS, LeverageEffect.MULTIPLICATIVE_PLUS_AMORTIZED),
        (ManipulationChannel.BAD_DEBT_SHIFTING, LeverageEffect.MULTIPLICATIVE),
    ])
    def test_effect_per_channel(self, channel, effect):
        assert MatrixService.lookup(channel).leverage_effect is effect

    @pytest.mark.parametrize('channel', list(ManipulationChannel))
    def test_every_channel_has_a_row(self, channel):
        assert channel in MatrixService.lookup(channel).channels

    def test_lookup_by_value(self):
        assert MatrixService.lookup('HaltArbitrage').channel is ManipulationChannel.HALT_ARBITRAGE

    def test_unknown_channel(self):
        with pytest.raises(InvalidParameter):
            MatrixService.lookup('Wash')


class TestChannelsByEffect:

    def test_framework_introduced(self):
        assert MatrixService.channels_by_effect(LeverageEffect.FRAMEWORK_INTRODUCED) == [
            ManipulationChannel.PRE_EMPTION, ManipulationChannel.HALT_ARBITRAGE,
        ]

    def test_rows_partition_the_primary_channels(self):
        union = [channel for effect in LeverageEffect for channel in MatrixService.channels_by_effect(effect)]
        assert len(union) == len(set(union)) == 10
        assert union and set(union) == {row.channel for row in MatrixService.rows()}

    def test_unknown_effect(self):
        with pytest.raises(InvalidParameter):
            MatrixService.channels_by_effect('Quadratic')


class TestExport:

    def test_json_matches_golden(self):
        golden = json.loads((GOLDEN_DIR / 'channel_control_matrix.json').read_text(encoding='utf-8'))
        assert json.loads(MatrixService.to_json()) == golden

    def test_frame_has_one_row_per_matrix_row(self):
        frame = MatrixService.to_frame()
        assert len(frame) == 10
        sports = frame[frame['channel'] == 'OutcomeSports'].iloc[0]
        assert sports['also_covers'] == 'OutcomeSubNationalPolitical;InformationReleaseTiming'
