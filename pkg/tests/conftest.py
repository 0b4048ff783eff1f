import numpy as np
import pytest

from starspec import models


@pytest.fixture(scope="session")
def lipkin25():
    return models.lipkin(2.5, "even")


@pytest.fixture(scope="session")
def toeplitz01():
    return models.toeplitz(0.0, 1.0)


@pytest.fixture(scope="session")
def alternating():
    return models.alternating_states()


def rel(a, b):
    return np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(1.0, np.abs(np.asarray(b)))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
