"""
Shared fixtures: scenarios, flat-path venues and the bundled run configs
"""
from pathlib import Path

import pytest

from eventperp.app.models import DepthLadder, MarginEngine, MarketSpec, validate_scenario
from eventperp.app.services import ConfigService, IndexPathService, VenueService

DATA_DIR = Path(__file__).resolve().parents[1] / 'eventperp' / 'data'
CONFIG_DIR = DATA_DIR / 'configs'
GOLDEN_DIR = Path(__file__).resolve().parent / 'golden'


# ============================================================
# Scenarios
# ============================================================

@pytest.fixture
def scenario_a():
    """Sports scenario: K=1e5, C=5e4, pi=0.3, P=0.10, pen=10"""
    return validate_scenario({
        'label': 'A', 'k_manip': 1e5, 'capital': 5e4, 'pi_yes': 0.3,
        'p_detected': 0.10, 'penalty_factor': 10,
    })


@pytest.fixture
def scenario_b():
    return validate_scenario({
        'label': 'B', 'k_manip': 2e5, 'capital': 2e5, 'pi_yes': 0.4,
        'p_detected': 0.20, 'penalty_factor': 30,
    })


@pytest.fixture
def bundled_scenarios():
    return ConfigService.load_scenarios(DATA_DIR / 'scenarios.txt')


# ============================================================
# Venues
# ============================================================

def flat_venue(level=0.5, resolution_time=20, outcome=1, engine=None, ladder=None,
               pool_fraction=0.0, **market):
    """Venue on a constant path that jumps to the outcome at resolution"""
    spec = MarketSpec(resolution_time=resolution_time, outcome=outcome, **market)
    path = IndexPathService.constant_path(spec, level)
    return VenueService(spec, engine or MarginEngine(kind='e0'), path,
                        ladder=ladder or DepthLadder(), pool_fraction=pool_fraction)


# ============================================================
# Bundled run configs
# ============================================================

@pytest.fixture
def load_config():
    def load(name):
        return ConfigService.load_run_config(CONFIG_DIR / name)
    return load
