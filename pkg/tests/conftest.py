import numpy as np
import pytest

from dunklriesz.grids import Grid, GridSpec
from dunklriesz.rootsys import ReflectionSetup

SETUP_PARAMS = {
    "n1g00": (1, (0.0,)),
    "n1g05": (1, (0.5,)),
    "n1g25": (1, (2.5,)),
    "n2": (2, (0.5, 1.0)),
}


@pytest.fixture(scope="session")
def grids():
    """One Grid per standard setup, shared across the whole run."""
    out = {}
    for label, (dim, mults) in SETUP_PARAMS.items():
        setup = ReflectionSetup(dim, mults)
        out[label] = Grid(setup, GridSpec.default_for(dim))
    return out


@pytest.fixture(scope="session")
def grid_n1g05(grids):
    return grids["n1g05"]


@pytest.fixture(scope="session")
def grid_n1g00(grids):
    return grids["n1g00"]


@pytest.fixture(scope="session")
def grid_n1g25(grids):
    return grids["n1g25"]


@pytest.fixture(scope="session")
def grid_n2(grids):
    return grids["n2"]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
