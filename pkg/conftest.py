import sys
from pathlib import Path

import pytest

# repo root op sys.path zodat `import costwise` werkt zonder install
ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


@pytest.fixture
def tiny():
    from costwise.circuit import bundled_fixture, load_circuit
    return load_circuit(bundled_fixture("tiny"))


@pytest.fixture(scope="session")
def icu():
    from costwise.circuit import bundled_fixture, load_circuit
    return load_circuit(bundled_fixture("icu"))


@pytest.fixture(scope="session")
def icu_form(icu):
    from costwise.reduction import reduce
    return reduce(icu)
