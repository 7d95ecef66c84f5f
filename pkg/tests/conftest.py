"""Shared configuration and fixtures for all tests

Services are built once per session through the AppController with default
settings, so every test sees the same tolerances as the command line.
"""

import os
import shutil
import sys
import tempfile

import numpy as np
import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings, strategies as st

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config.settings import Settings
from src.controllers.app_controller import AppController


hypothesis_settings.register_profile(
    'ci', max_examples=50, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much]
)
hypothesis_settings.register_profile('dev', max_examples=200, deadline=None)
hypothesis_settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'ci'))

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', 'data')


# Hypothesis strategies

@st.composite
def unit_vectors(draw):
    """Uniform-ish unit vectors from bounded normal-like coordinates"""
    coords = draw(st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=3, max_size=3))
    v = np.array(coords)
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
        norm = 1.0
    return v / norm


@st.composite
def ring_heights(draw, min_valence=4, max_valence=10):
    """Azimuth gaps and heights of a star that is a graph over the xy plane"""
    n = draw(st.integers(min_valence, max_valence))
    gaps = draw(st.lists(st.floats(0.3, 1.0), min_size=n, max_size=n))
    heights = draw(st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=n, max_size=n))
    return np.array(gaps), np.array(heights)


def ring_from(gaps: np.ndarray, heights: np.ndarray) -> np.ndarray:
    azimuth = 2.0 * np.pi * np.cumsum(gaps) / np.sum(gaps)
    return np.column_stack([np.cos(azimuth), np.sin(azimuth), heights])


# Settings and services

@pytest.fixture(scope='session')
def test_settings(tmp_path_factory):
    """Default settings backed by a throwaway config file"""
    config = tmp_path_factory.mktemp('config') / 'config.json'
    return Settings(str(config))


@pytest.fixture(scope='session')
def app(test_settings):
    return AppController(test_settings, configure_logging=False)


@pytest.fixture(scope='session')
def spherical(app):
    return app.spherical_service


@pytest.fixture(scope='session')
def stars(app):
    return app.star_service


@pytest.fixture(scope='session')
def indices(app):
    return app.index_service


@pytest.fixture(scope='session')
def arrangements(app):
    return app.arrangement_service


@pytest.fixture(scope='session')
def degrees(app):
    return app.degree_service


@pytest.fixture(scope='session')
def chords(app):
    return app.chord_service


@pytest.fixture(scope='session')
def meshes(app):
    return app.mesh_service


@pytest.fixture(scope='session')
def fixtures(app):
    return app.fixture_service


@pytest.fixture(scope='session')
def verification(app):
    return app.verification_service


# Geometry

@pytest.fixture
def octant(spherical):
    return spherical.polygon([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


@pytest.fixture
def cube_corner(fixtures):
    return fixtures.cube_corner()


@pytest.fixture
def saddle(fixtures):
    return fixtures.saddle()


@pytest.fixture
def monkey_saddle(fixtures):
    return fixtures.monkey_saddle()


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def temp_directory():
    """Temporary directory for tests that write files"""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


def pytest_configure(config):
    """Custom pytest configuration"""
    config.addinivalue_line(
        "markers", "unit: mark test as unit"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as integration"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow"
    )


def pytest_collection_modifyitems(config, items):
    """Tags tests by the module they live in"""
    for item in items:
        if "test_integration" in item.nodeid or "test_properties" in item.nodeid:
            item.add_marker(pytest.mark.integration)
            item.add_marker(pytest.mark.slow)
        else:
            item.add_marker(pytest.mark.unit)
