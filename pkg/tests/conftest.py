import sys
from pathlib import Path

import numpy as np
import pytest

from sofpalm import Plant, make_mass_spring

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def scalar_plant() -> Plant:
    """A = -1, B1 = B2 = 1, Q = R = 1; everything solvable by hand."""
    return Plant(A=-1.0, B1=1.0, B2=1.0, Q=1.0, R=1.0)


@pytest.fixture(scope="session")
def mass_spring4() -> Plant:
    return make_mass_spring(4)


@pytest.fixture(scope="session")
def mass_spring5() -> Plant:
    return make_mass_spring(5)


@pytest.fixture(scope="session")
def mass_spring10() -> Plant:
    return make_mass_spring(10)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
