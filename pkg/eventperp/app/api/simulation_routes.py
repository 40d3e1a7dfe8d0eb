"""
Venue simulation and attack API routes
"""
from flask import Blueprint, jsonify, request
from eventperp.app.services import AdversaryService, ConfigService, ExperimentService
import logging

logger = logging.getLogger(__name__)

simulation_bp = Blueprint('simulation', __name__, url_prefix='/api')

# Requests run in the worker; keep them bounded
MAX_HTTP_RUNS = 200


def _load_config():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        return None, (jsonify({'error': 'Request body must be a JSON run config'}), 400)
    config = ConfigService.run_config_from_dict(data)
    runs = len(config.seeds) * len(config.variants())
    if runs > MAX_HTTP_RUNS:
        return None, (jsonify({'error': f'At most {MAX_HTTP_RUNS} runs per request, got {runs}'}), 400)
    return config, None


@simulation_bp.route('/simulate', methods=['POST'])
def simulate():
    """Seeded runs of a config; events are omitted unless include_events is true"""
    config, failure = _load_config()
    if failure:
        return failure

    include_events = request.args.get('include_events', 'false').lower() == 'true'
    reports = ExperimentService.simulate(config)
    summary = ExperimentService.summarize(reports)
    return jsonify({
        'runs': [report.to_dict(include_events) for report in reports],
        'summary': summary.to_dict(orient='records'),
    }), 200


@simulation_bp.route('/attack', methods=['POST'])
def attack():
    config, failure = _load_config()
    if failure:
        return failure
    if config.attack_channel is None:
        return jsonify({'error': 'Missing required field: attack.channel'}), 400

    reports = [AdversaryService.run_attack(config, seed) for seed in config.seeds]
    return jsonify({'attacks': [report.attack.to_dict() for report in reports]}), 200
