import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ppol import setup  # noqa: E402

_cache = {}


def test_srs(n, seed=1):
    key = (n, seed)
    if key not in _cache:
        _cache[key] = setup(n, seed=seed, insecure=True)[0]
    return _cache[key]


test_srs.__test__ = False


@pytest.fixture(scope="session")
def srs4():
    return test_srs(4)


@pytest.fixture(scope="session")
def srs8():
    return test_srs(8)


@pytest.fixture(scope="session")
def srs16():
    return test_srs(16)


@pytest.fixture(scope="session")
def srs64():
    return test_srs(64)


@pytest.fixture
def rng():
    return random.Random(1234)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
