"""
Shared fixtures for the thetachar test suite.
"""

import pytest

from thetachar.engine.root_system import build
from thetachar.services.cache_service import expansion_cache


@pytest.fixture
def a1():
    return build("A1")


@pytest.fixture
def a2():
    return build("A2")


@pytest.fixture
def b2():
    return build("B2")


@pytest.fixture
def g2():
    return build("G2")


@pytest.fixture
def fresh_cache():
    """Empty expansion cache, cleared again afterwards"""
    expansion_cache.clear()
    yield expansion_cache
    expansion_cache.clear()
