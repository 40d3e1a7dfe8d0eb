from .costbenefit_service import CostBenefitService
from .rent_service import RentService
from .index_path_service import IndexPathService
from .margin_service import MarginService
from .venue_service import VenueService
from .agent_service import AgentService
from .simulation_service import SimulationService, Strategy
from .adversary_service import AdversaryService
from .experiment_service import ExperimentService
from .matrix_service import MatrixService
from .config_service import ConfigService
from .output_service import OutputService

__all__ = ['CostBenefitService', 'RentService', 'IndexPathService', 'MarginService', 'VenueService',
           'AgentService', 'SimulationService', 'Strategy', 'AdversaryService', 'ExperimentService',
           'MatrixService', 'ConfigService', 'OutputService']
