import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nilkit.backends import CyclicBackend, heisenberg  # noqa: E402


@pytest.fixture
def Z():
    return CyclicBackend(0)


@pytest.fixture
def H():
    return heisenberg()


@pytest.fixture
def H3():
    return heisenberg(3)
