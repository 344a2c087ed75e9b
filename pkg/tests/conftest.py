import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rado import LinearSystem, arithmetic_progression, schur, sidon, single_equation


@pytest.fixture
def schur_system():
    return schur()


@pytest.fixture
def sidon_system():
    return sidon()


@pytest.fixture
def roth_system():
    # x + y = 2z, the 3-term progression in sum form
    return single_equation([1, 1, -2], name="roth")


@pytest.fixture
def dilated_system():
    # x + y = 3z: abundant but not partition regular
    return single_equation([1, 1, -3], name="dilated")


@pytest.fixture
def pair_system():
    return single_equation([1, -1], name="pair")


@pytest.fixture
def chain_system():
    # x1 + x2 = x3 = x4: fails abundance at columns {3, 4}
    return LinearSystem.from_rows([[1, 1, -1, 0], [0, 0, 1, -1]], name="chain")


@pytest.fixture
def ap4_system():
    return arithmetic_progression(4)
