from .threshold_routes import threshold_bp
from .rent_routes import rent_bp
from .matrix_routes import matrix_bp
from .simulation_routes import simulation_bp

__all__ = ['threshold_bp', 'rent_bp', 'matrix_bp', 'simulation_bp']
