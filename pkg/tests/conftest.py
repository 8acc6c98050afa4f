import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from awsym import make_grid


@pytest.fixture(scope="session")
def grid256():
    return make_grid(1, 256, 8.0)


@pytest.fixture(scope="session")
def phase256():
    return make_grid(2, 256, 8.0)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(1, 64, 4.0)


@pytest.fixture(scope="session")
def phase64():
    return make_grid(2, 64, 4.0)
