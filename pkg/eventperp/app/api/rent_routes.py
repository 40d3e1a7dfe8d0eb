"""
Informed-trading rent API routes
"""
from flask import Blueprint, jsonify, request
from eventperp.app.services import ConfigService, RentService
from eventperp.app.models import RentProfile
from eventperp.app.api.fields import require_number, require_numbers, require_object
from eventperp.app.utils.errors import ConfigError, EventPerpError
from eventperp.config.settings import RENT_LEVERAGES
import logging

logger = logging.getLogger(__name__)

rent_bp = Blueprint('rent', __name__, url_prefix='/api')


@rent_bp.route('/rents', methods=['POST'])
def rents():
    """Leveraged rent, Sharpe ratio and detection cost per profit across leverages"""
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or 'profile' not in data:
        return jsonify({'error': 'Missing required field: profile'}), 400

    raw = require_object(data['profile'], 'profile')
    try:
        profile = RentProfile.from_dict(raw)
    except EventPerpError:
        raise
    except KeyError as e:
        raise ConfigError(f"profile is missing {e}")
    except (TypeError, ValueError) as e:
        raise ConfigError(f"profile has an invalid value: {e}")

    leverages = require_numbers(data['leverages'], 'leverages') if 'leverages' in data else RENT_LEVERAGES
    funding = require_number(data.get('funding_cost', 0.0), 'funding_cost')
    rows = RentService.rent_table(profile, leverages, funding, data.get('label'))
    return jsonify({'profile': profile.to_dict(), 'rows': rows}), 200


@rent_bp.route('/rent-compression', methods=['POST'])
def rent_compression():
    """Trader outcome under E2 and E0 on one seed; body is a run config plus trader_id"""
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or not data.get('trader_id'):
        return jsonify({'error': 'Missing required field: trader_id'}), 400

    config = ConfigService.run_config_from_dict(data)
    seed = int(require_number(data.get('seed', config.seed), 'seed'))
    report = RentService.compare_engines(config, seed, str(data['trader_id']))
    return jsonify(report.to_dict()), 200
