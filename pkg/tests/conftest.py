"""Shared fixtures: layers are built once per session."""

import pytest

from src.core.config_file import GridConfig
from src.core.layer import LayerParams, arctan_layer, new_layer
from src.core.numerics import QuadratureConfig
from src.core.potential import build_potential


@pytest.fixture(scope="session")
def quad():
    """Default quadrature configuration."""
    return QuadratureConfig()


@pytest.fixture(scope="session")
def unit_layer():
    """Unit symmetric layer: s = 1/2, alpha = beta = 1, C1 = C2 = 1, kappa = 2."""
    return new_layer(LayerParams(s=0.5, alpha=1.0, beta=1.0, kappa=2.0, c1=1.0, c2=1.0))


@pytest.fixture(scope="session")
def skew_layer():
    """Asymmetric layer: s = 0.4, alpha = 0.5, beta = 0.8, C1 = 1, C2 = 2, kappa = 4."""
    return new_layer(LayerParams(s=0.4, alpha=0.5, beta=0.8, kappa=4.0, c1=1.0, c2=2.0))


@pytest.fixture(scope="session")
def arctan():
    """Exact arctan profile."""
    return arctan_layer()


@pytest.fixture(scope="session")
def unit_model(unit_layer, quad):
    """Potential of the unit layer on the default grid (x_far = 1e4, 2001 nodes)."""
    return build_potential(unit_layer, GridConfig(), quad)
