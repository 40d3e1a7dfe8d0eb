"""
Cost-benefit API routes: leverage threshold, profit curve and sensitivity sweeps
"""
from flask import Blueprint, jsonify, request
from eventperp.app.services import CostBenefitService, RentService
from eventperp.app.models import validate_scenario
from eventperp.app.api.fields import require_number, require_numbers, require_object
from eventperp.config.settings import MAX_WORKERS
import logging

logger = logging.getLogger(__name__)

threshold_bp = Blueprint('threshold', __name__, url_prefix='/api')


@threshold_bp.route('/threshold', methods=['POST'])
def threshold():
    """Leverage threshold for one scenario, or for a list under 'scenarios'"""
    data = request.get_json(silent=True)
    if not data or not isinstance(data, dict):
        return jsonify({'error': 'Request body must be a JSON object'}), 400

    raw_scenarios = data['scenarios'] if 'scenarios' in data else [data]
    if not isinstance(raw_scenarios, list):
        return jsonify({'error': 'scenarios must be a list of scenario objects'}), 400

    rows = []
    for i, raw in enumerate(raw_scenarios):
        scenario = validate_scenario(require_object(raw, f"scenarios[{i}]"))
        result = CostBenefitService.leverage_threshold(scenario)
        row = {**scenario.to_dict(), **result.to_dict()}
        if scenario.leverage is not None:
            row['expected_profit'] = CostBenefitService.expected_manipulation_profit(scenario)
        rows.append(row)

    return jsonify({'results': rows}), 200


@threshold_bp.route('/profit-curve', methods=['POST'])
def profit_curve():
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or not data.get('leverages'):
        return jsonify({'error': 'Missing required field: leverages'}), 400
    leverages = require_numbers(data['leverages'], 'leverages')
    scenario = validate_scenario(require_object(data.get('scenario') or {}, 'scenario'))
    return jsonify({'curve': CostBenefitService.profit_curve(scenario, leverages)}), 200


@threshold_bp.route('/sweep', methods=['POST'])
def sweep():
    """Sensitivity grid from a template scenario and axis values"""
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or 'template' not in data or 'axes' not in data:
        return jsonify({'error': 'Missing required fields: template, axes'}), 400

    template = validate_scenario(require_object(data['template'], 'template'))
    axes = {name: require_numbers(values, f"axes.{name}")
            for name, values in require_object(data['axes'], 'axes').items()}
    grid = CostBenefitService.sweep_thresholds(template, axes, data.get('label'), workers=MAX_WORKERS)
    body = grid.to_dict()
    if data.get('band'):
        band = require_numbers(data['band'], 'band')
        if len(band) != 2:
            return jsonify({'error': 'band must be [low, high]'}), 400
        body['band'] = CostBenefitService.band_deviation(grid, (band[0], band[1]))
    return jsonify(body), 200


@threshold_bp.route('/leverage-cap', methods=['POST'])
def leverage_cap():
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or 'scenario' not in data or 'leverage_cap' not in data:
        return jsonify({'error': 'Missing required fields: scenario, leverage_cap'}), 400
    scenario = validate_scenario(require_object(data['scenario'], 'scenario'))
    cap = require_number(data['leverage_cap'], 'leverage_cap')
    return jsonify(RentService.leverage_cap_check(scenario, cap)), 200
