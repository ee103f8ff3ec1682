import numpy as np
import pytest

from ueiqc.codes import get_code


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture(scope="session")
def five():
    return get_code("513")


@pytest.fixture(scope="session")
def steane():
    return get_code("713")


@pytest.fixture(scope="session")
def eight():
    return get_code("833")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
