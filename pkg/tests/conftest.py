import numpy as np
import pytest

from covprop import Scheme, build_grid, build_propagator, timestep_from_cfl

FINAL_TIME = 3.979


@pytest.fixture(scope="session")
def grid200():
    return build_grid(200)


@pytest.fixture(scope="session")
def ts200(grid200):
    return timestep_from_cfl(1.0, grid200)


@pytest.fixture(scope="session")
def propagators(grid200, ts200):
    """One-step matrices reused across test modules."""
    return {
        (scheme, alpha): build_propagator(scheme, alpha, grid200, ts200)
        for scheme in (Scheme.CRANK_NICOLSON, Scheme.LAX_WENDROFF)
        for alpha in (0.5, 1.0)
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
