"""
Tests for the JSON API
"""
import json

import pytest

from eventperp.app.main import create_app
from tests.conftest import GOLDEN_DIR

SCENARIO_A = {
    'label': 'A', 'k_manip': 1e5, 'capital': 5e4, 'pi_yes': 0.3,
    'p_detected': 0.10, 'penalty_factor': 10,
}

SMALL_RUN = {
    'market': {'resolution_time': 12, 'outcome': 1},
    'volatility': 0.02,
    'engine': {'kind': 'e2'},
    'agents': [
        {'agent_id': 'longs', 'kind': 'leveraged', 'side': 'long', 'notional': 200, 'leverage': 5, 'count': 2},
        {'agent_id': 'shorts', 'kind': 'leveraged', 'side': 'short', 'notional': 200, 'leverage': 5},
    ],
    'seed': 2,
    'reps': 2,
}

BAD_DEBT_RUN = {
    'market': {'resolution_time': 20, 'outcome': 1},
    'volatility': 0,
    'pool_fraction': 0.5,
    'engine': {'kind': 'e0'},
    'attack': {'channel': 'bad_debt_shift', 'notional': 1000, 'manipulator_leverage': 5,
               'counterparty_leverage': 5, 'believed_probability': 0.8},
}


@pytest.fixture
def client():
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    assert response.get_json() == {'status': 'healthy'}


def test_unknown_route(client):
    response = client.get('/api/nothing-here')
    assert response.status_code == 404
    assert response.get_json() == {'error': 'Not found'}


# ============================================================
# THRESHOLD ROUTES
# ============================================================

class TestThreshold:

    def test_single_scenario(self, client):
        response = client.post('/api/threshold', json=SCENARIO_A)
        assert response.status_code == 200
        [row] = response.get_json()['results']
        assert row['l_star'] == pytest.approx(4.2857, abs=1e-4)
        assert row['regime'] == 'Mixed'
        assert 'expected_profit' not in row

    def test_expected_profit_at_the_given_leverage(self, client):
        response = client.post('/api/threshold', json={**SCENARIO_A, 'leverage': 5})
        [row] = response.get_json()['results']
        assert row['expected_profit'] == pytest.approx(2.5e4)

    def test_list_of_scenarios(self, client):
        second = {**SCENARIO_A, 'label': 'cheap', 'k_manip': 1e3}
        response = client.post('/api/threshold', json={'scenarios': [SCENARIO_A, second]})
        rows = response.get_json()['results']
        assert [row['label'] for row in rows] == ['A', 'cheap']

    def test_certain_outcome_is_rejected(self, client):
        response = client.post('/api/threshold', json={**SCENARIO_A, 'pi_yes': 1.0})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'DegenerateProbability'

    def test_empty_body(self, client):
        response = client.post('/api/threshold', data='', content_type='application/json')
        assert response.status_code == 400


    def test_body_must_be_an_object(self, client):
        response = client.post('/api/threshold', json=[SCENARIO_A])
        assert response.status_code == 400

    def test_scenarios_must_be_a_list(self, client):
        response = client.post('/api/threshold', json={'scenarios': 'A'})
        assert response.status_code == 400

    def test_scenario_entries_must_be_objects(self, client):
        response = client.post('/api/threshold', json={'scenarios': [1]})
        assert response.status_code == 400
        body = response.get_json()
        assert body['kind'] == 'ConfigError'
        assert 'scenarios[0]' in body['error']

    def test_non_numeric_field(self, client):
        response = client.post('/api/threshold', json={**SCENARIO_A, 'k_manip': 'lots'})
        assert response.status_code == 400


class TestProfitCurve:

    def test_curve_crosses_zero_at_the_threshold(self, client):
        response = client.post('/api/profit-curve', json={'scenario': SCENARIO_A, 'leverages': [4, 5]})
        assert response.status_code == 200
        curve = response.get_json()['curve']
        assert curve[0]['profit'] == pytest.approx(-1e4)
        assert curve[1]['profit'] == pytest.approx(2.5e4)

    def test_missing_leverages(self, client):
        response = client.post('/api/profit-curve', json={'scenario': SCENARIO_A})
        assert response.status_code == 400


    def test_leverages_must_be_numbers(self, client):
        for leverages in (['x'], [True], 5):
            response = client.post('/api/profit-curve', json={'scenario': SCENARIO_A, 'leverages': leverages})
            assert response.status_code == 400
            assert response.get_json()['kind'] == 'ConfigError'

    def test_scenario_must_be_an_object(self, client):
        response = client.post('/api/profit-curve', json={'scenario': [1], 'leverages': [4]})
        assert response.status_code == 400


class TestSweep:

    def test_grid_and_band(self, client):
        response = client.post('/api/sweep', json={
            'template': SCENARIO_A,
            'label': 'A',
            'axes': {'k_manip': [5e4, 1e5, 5e5], 'p_detected': [0.05, 0.1, 0.3], 'penalty_factor': [5, 10, 30]},
            'band': [2, 20],
        })
        assert response.status_code == 200
        body = response.get_json()
        assert len(body['points']) == 27
        assert body['band']['computed_min'] == pytest.approx(1.7857, abs=1e-4)

    def test_unknown_axis(self, client):
        response = client.post('/api/sweep', json={'template': SCENARIO_A, 'axes': {'volume': [1, 2]}})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'InvalidParameter'


    def test_axis_values_must_be_a_list(self, client):
        response = client.post('/api/sweep', json={'template': SCENARIO_A, 'axes': {'k_manip': 5}})
        assert response.status_code == 400
        assert 'axes.k_manip' in response.get_json()['error']

    def test_band_needs_two_numbers(self, client):
        response = client.post('/api/sweep', json={
            'template': SCENARIO_A, 'axes': {'k_manip': [1e5]}, 'band': [2],
        })
        assert response.status_code == 400


class TestLeverageCap:

    def test_cap_above_threshold(self, client):
        response = client.post('/api/leverage-cap', json={'scenario': SCENARIO_A, 'leverage_cap': 5})
        assert response.status_code == 200
        assert response.get_json()['profitable_within_cap'] is True

    def test_cap_below_threshold(self, client):
        response = client.post('/api/leverage-cap', json={'scenario': SCENARIO_A, 'leverage_cap': 3})
        assert response.get_json()['profitable_within_cap'] is False

    def test_cap_must_be_a_number(self, client):
        response = client.post('/api/leverage-cap', json={'scenario': SCENARIO_A, 'leverage_cap': '5'})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'ConfigError'


# ============================================================
# MATRIX ROUTES
# ============================================================

class TestMatrix:

    def test_whole_matrix(self, client):
        golden = json.loads((GOLDEN_DIR / 'channel_control_matrix.json').read_text(encoding='utf-8'))
        response = client.get('/api/matrix')
        assert response.status_code == 200
        assert response.get_json() == golden

    def test_csv(self, client):
        response = client.get('/api/matrix?format=csv')
        assert response.mimetype == 'text/csv'
        assert response.get_data(as_text=True).startswith('channel,')

    def test_channel(self, client):
        response = client.get('/api/matrix/channel/InformationReleaseTiming')
        assert response.status_code == 200
        assert response.get_json()['channel'] == 'OutcomeSports'

    def test_unknown_channel(self, client):
        assert client.get('/api/matrix/channel/Wash').status_code == 400

    def test_effect(self, client):
        response = client.get('/api/matrix/effect/FrameworkIntroduced')
        assert response.get_json()['channels'] == ['PreEmption', 'HaltArbitrage']


# ============================================================
# SIMULATION ROUTES
# ============================================================

class TestSimulate:

    def test_runs_and_summary(self, client):
        response = client.post('/api/simulate', json=SMALL_RUN)
        assert response.status_code == 200
        body = response.get_json()
        assert [run['seed'] for run in body['runs']] == [2, 3]
        assert 'events' not in body['runs'][0]
        assert len(body['summary']) == 1
        assert body['summary'][0]['runs'] == 2

    def test_events_on_request(self, client):
        response = client.post('/api/simulate?include_events=true', json=SMALL_RUN)
        assert 'events' in response.get_json()['runs'][0]

    def test_same_body_same_runs(self, client):
        first = client.post('/api/simulate', json=SMALL_RUN).get_json()
        second = client.post('/api/simulate', json=SMALL_RUN).get_json()
        assert first['runs'] == second['runs']

    def test_too_many_runs(self, client):
        response = client.post('/api/simulate', json={**SMALL_RUN, 'reps': 500})
        assert response.status_code == 400
        assert 'At most' in response.get_json()['error']

    def test_missing_market(self, client):
        response = client.post('/api/simulate', json={'engine': {'kind': 'e0'}})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'ConfigError'


class TestAttack:

    def test_bad_debt_shift(self, client):
        response = client.post('/api/attack', json=BAD_DEBT_RUN)
        assert response.status_code == 200
        [report] = response.get_json()['attacks']
        assert report['channel'] == 'BadDebtShifting'
        assert report['pool_drawdown'] == pytest.approx(300)

    def test_attack_channel_required(self, client):
        response = client.post('/api/attack', json=SMALL_RUN)
        assert response.status_code == 400
        assert 'attack.channel' in response.get_json()['error']


# ============================================================
# RENT ROUTES
# ============================================================

INSIDER = {'unleveraged_rent_per_event': 0.05, 'return_volatility': 0.2, 'detection_cost': 1e3, 'capital': 1e4}


class TestRents:

    def test_sharpe_ratio_is_flat_in_leverage(self, client):
        response = client.post('/api/rents', json={'profile': INSIDER, 'leverages': [1, 2, 10], 'label': 'insider'})
        assert response.status_code == 200
        rows = response.get_json()['rows']
        assert [row['sharpe_ratio'] for row in rows] == pytest.approx([0.25, 0.25, 0.25])
        assert [row['detection_cost_per_profit'] for row in rows] == pytest.approx([2.0, 1.0, 0.2])
        assert rows[0]['label'] == 'insider'

    def test_default_leverages(self, client):
        response = client.post('/api/rents', json={'profile': INSIDER})
        assert [row['leverage'] for row in response.get_json()['rows']] == [1, 2, 5, 10, 20]

    def test_missing_profile(self, client):
        response = client.post('/api/rents', json={'leverages': [1]})
        assert response.status_code == 400

    def test_incomplete_profile(self, client):
        response = client.post('/api/rents', json={'profile': {'capital': 1e4}})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'ConfigError'

    def test_leverage_below_one(self, client):
        response = client.post('/api/rents', json={'profile': INSIDER, 'leverages': [0.5]})
        assert response.status_code == 400
        assert response.get_json()['kind'] == 'InvalidParameter'


class TestRentCompression:

    def test_report_for_one_seed(self, client):
        response = client.post('/api/rent-compression', json={**SMALL_RUN, 'trader_id': 'longs', 'seed': 4})
        assert response.status_code == 200
        body = response.get_json()
        assert body['seed'] == 4
        assert body['dynamic']['engine'] == 'e2'
        assert body['static']['engine'] == 'e0'

    def test_missing_trader(self, client):
        response = client.post('/api/rent-compression', json=SMALL_RUN)
        assert response.status_code == 400
