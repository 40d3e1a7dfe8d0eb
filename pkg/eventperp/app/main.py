"""
Main Flask application for the event-perp analysis service
"""
from flask import Flask, jsonify
from werkzeug.middleware.proxy_fix import ProxyFix
from eventperp.config.settings import FLASK_ENV, LOG_LEVEL, PORT
from eventperp.app.api import threshold_bp, rent_bp, matrix_bp, simulation_bp
from eventperp.app.utils.errors import EventPerpError
import logging

logger = logging.getLogger(__name__)


def create_app():
    """Create and configure Flask application"""
    logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    app = Flask(__name__)

    # Behind gunicorn and a reverse proxy in deployment
    app.wsgi_app = ProxyFix(app.wsgi_app, x_proto=1, x_host=1)
    app.json.sort_keys = True

    # Register blueprints
    app.register_blueprint(threshold_bp)
    app.register_blueprint(rent_bp)
    app.register_blueprint(matrix_bp)
    app.register_blueprint(simulation_bp)

    # Health check endpoint
    @app.route('/health')
    def health_check():
        return jsonify({'status': 'healthy'}), 200

    # Error handlers
    @app.errorhandler(EventPerpError)
    def domain_error(e):
        if e.http_status >= 500:
            logger.error(f"Request failed: {e.message}")
        return jsonify(e.to_dict()), e.http_status

    @app.errorhandler(404)
    def not_found(e):
        return jsonify({'error': 'Not found'}), 404

    @app.errorhandler(500)
    def internal_error(e):
        return jsonify({'error': 'Internal server error'}), 500

    return app


if __name__ == '__main__':
    create_app().run(host='0.0.0.0', port=PORT, debug=FLASK_ENV == 'development')
