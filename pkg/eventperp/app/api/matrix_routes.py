"""
Channel-control matrix API routes
"""
from flask import Blueprint, Response, jsonify, request
from eventperp.app.services import MatrixService

matrix_bp = Blueprint('matrix', __name__, url_prefix='/api/matrix')


@matrix_bp.route('', methods=['GET'])
def get_matrix():
    """Whole matrix; ?format=csv returns it as CSV"""
    if request.args.get('format') == 'csv':
        return Response(MatrixService.to_frame().to_csv(index=False), mimetype='text/csv')
    return jsonify([row.to_dict() for row in MatrixService.rows()]), 200


@matrix_bp.route('/channel/<channel>', methods=['GET'])
def get_channel(channel):
    return jsonify(MatrixService.lookup(channel).to_dict()), 200


@matrix_bp.route('/effect/<effect>', methods=['GET'])
def get_effect(effect):
    channels = MatrixService.channels_by_effect(effect)
    return jsonify({'effect': effect, 'channels': [c.value for c in channels]}), 200
