"""
Pytest configuration and shared fixtures for the line geometry tests.

Generated geometries are immutable, so they are built once per session.
"""

import random

import pytest

from src.services.geometry_gen import (
    generate_ag, generate_complete, generate_near_pencil, generate_pg, standard_polarity,
)
from src.services.incidence_core import dual_space


# ============================================================================
# Projective Space Fixtures
# ============================================================================

@pytest.fixture(scope="session")
def pg32_labeled():
    """PG(3,2) with coordinate labels."""
    return generate_pg(3, 2)


@pytest.fixture(scope="session")
def pg32(pg32_labeled):
    return pg32_labeled.space


@pytest.fixture(scope="session")
def pg33_labeled():
    """PG(3,3) with coordinate labels."""
    return generate_pg(3, 3)


@pytest.fixture(scope="session")
def pg33(pg33_labeled):
    return pg33_labeled.space


@pytest.fixture(scope="session")
def fano_labeled():
    """The Fano plane PG(2,2)."""
    return generate_pg(2, 2)


@pytest.fixture(scope="session")
def fano(fano_labeled):
    return fano_labeled.space


# ============================================================================
# Affine Space Fixtures
# ============================================================================

@pytest.fixture(scope="session")
def ag23():
    """The affine plane AG(2,3)."""
    return generate_ag(2, 3).space


@pytest.fixture(scope="session")
def ag33_labeled():
    """AG(3,3) with coordinate labels."""
    return generate_ag(3, 3)


@pytest.fixture(scope="session")
def ag33(ag33_labeled):
    return ag33_labeled.space


# ============================================================================
# Degenerate Space Fixtures
# ============================================================================

@pytest.fixture(scope="session")
def k5():
    return generate_complete(5).space


@pytest.fixture(scope="session")
def k8_labeled():
    return generate_complete(8)


@pytest.fixture(scope="session")
def k8(k8_labeled):
    return k8_labeled.space


@pytest.fixture(scope="session")
def near_pencil5():
    """Near-pencil on 5 points: {1,2,3,4} and the lines {0,i}."""
    return generate_near_pencil(5).space


@pytest.fixture(scope="session")
def non_exchange():
    """A 6-point linear space violating the exchange axiom."""
    from test_helpers import non_exchange_space
    return non_exchange_space()


# ============================================================================
# Duality Fixtures
# ============================================================================

@pytest.fixture(scope="session")
def pg32_polarity(pg32_labeled):
    """Standard polarity of PG(3,2) and its induced line map."""
    return standard_polarity(pg32_labeled)


@pytest.fixture(scope="session")
def pg33_polarity(pg33_labeled):
    return standard_polarity(pg33_labeled)


@pytest.fixture(scope="session")
def pg32_dual(pg32):
    return dual_space(pg32)


# ============================================================================
# Randomness
# ============================================================================

@pytest.fixture
def rng():
    """Seeded random generator, fresh per test."""
    return random.Random(20240611)


# ============================================================================
# Pytest Configuration
# ============================================================================

def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests that drive the command line end to end"
    )
    config.addinivalue_line(
        "markers", "acceptance: marks the desk-scale acceptance counts"
    )
