"""
Application configuration settings
"""
import os
from dotenv import load_dotenv

load_dotenv()


def _float_list(name: str, default: str):
    raw = os.getenv(name, default)
    return [float(item.strip()) for item in raw.split(',') if item.strip()]


# Application Configuration
ARTIFACT_VERSION = os.getenv('EVENTPERP_ARTIFACT_VERSION', '1.0.0')
LOG_LEVEL = os.getenv('EVENTPERP_LOG_LEVEL', 'INFO').upper()
FLASK_ENV = os.getenv('FLASK_ENV', 'development')
PORT = int(os.getenv('PORT', 8080))

# Numerical guards
PROBABILITY_EPSILON = float(os.getenv('EVENTPERP_PROBABILITY_EPSILON', '1e-12'))
REGIME_RATIO_CUTOFF = float(os.getenv('EVENTPERP_REGIME_RATIO_CUTOFF', '10'))
CONSERVATION_TOLERANCE = float(os.getenv('EVENTPERP_CONSERVATION_TOLERANCE', '1e-9'))

# Margin engine defaults
MAINTENANCE_FRACTION = float(os.getenv('EVENTPERP_MAINTENANCE_FRACTION', '0.1'))
VOL_COEFFICIENT = float(os.getenv('EVENTPERP_VOL_COEFFICIENT', '1.0'))
TTR_COEFFICIENT = float(os.getenv('EVENTPERP_TTR_COEFFICIENT', '0.5'))
ENTRY_DISTANCE_COEFFICIENT = float(os.getenv('EVENTPERP_ENTRY_DISTANCE_COEFFICIENT', '1.0'))
VOL_WINDOW_TICKS = int(os.getenv('EVENTPERP_VOL_WINDOW_TICKS', '20'))
VOL_REFERENCE = float(os.getenv('EVENTPERP_VOL_REFERENCE', '0.02'))
TTR_REFERENCE_TICKS = int(os.getenv('EVENTPERP_TTR_REFERENCE_TICKS', '24'))

# Depth ladder (per side); offsets are bucket outer edges in basis points
LADDER_OFFSETS_BPS = _float_list('EVENTPERP_LADDER_OFFSETS_BPS', '25,50,100,200,500')
LADDER_QUANTITIES = _float_list('EVENTPERP_LADDER_QUANTITIES', '200,600,2000,6000,30000')
BOUNDARY_DEPTH_RATIO = float(os.getenv('EVENTPERP_BOUNDARY_DEPTH_RATIO', '1.7'))
BOUNDARY_BAND = float(os.getenv('EVENTPERP_BOUNDARY_BAND', '0.1'))
IMPACT_PERSISTENCE = float(os.getenv('EVENTPERP_IMPACT_PERSISTENCE', '1.0'))

# Venue lifecycle
POOL_FRACTION = float(os.getenv('EVENTPERP_POOL_FRACTION', '0.10'))
FINAL_WINDOW_TICKS = int(os.getenv('EVENTPERP_FINAL_WINDOW_TICKS', '10'))
INDEX_VOLATILITY = float(os.getenv('EVENTPERP_INDEX_VOLATILITY', '0.08'))
START_INDEX = float(os.getenv('EVENTPERP_START_INDEX', '0.5'))
LIQUIDITY_PROVIDER_ID = os.getenv('EVENTPERP_LIQUIDITY_PROVIDER_ID', 'book')

# Adversaries
SPOOF_REACTION_COEFFICIENT = float(os.getenv('EVENTPERP_SPOOF_REACTION_COEFFICIENT', '0.1'))
PREEMPTION_EXIT_DELAY_TICKS = int(os.getenv('EVENTPERP_PREEMPTION_EXIT_DELAY_TICKS', '5'))

# Informed-trading rents
RENT_LEVERAGES = _float_list('EVENTPERP_RENT_LEVERAGES', '1,2,5,10,20')

# Parallel repetition sweeps
MAX_WORKERS = int(os.getenv('EVENTPERP_MAX_WORKERS', '1'))

# Allowed textual values
ENGINE_KINDS = ['e0', 'e2']
EVENT_CLASSES = ['sports', 'politics', 'crypto', 'other']
HALT_MODES = ['close_at_index', 'freeze_to_oracle']
AGENT_KINDS = ['leveraged', 'informed', 'noise', 'vol_injector']
ATTACK_CHANNELS = ['preemption', 'halt_arbitrage', 'bad_debt_shift', 'trade_push', 'spoof']
OUTPUT_FORMATS = ['json', 'csv']
