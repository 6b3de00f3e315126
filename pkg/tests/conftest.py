import functools

import pytest
from hypothesis import settings

from commitment_limits import make_coordination, make_duopoly

settings.register_profile("probes", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("probes")


@functools.lru_cache(maxsize=None)
def duopoly(r: float, d: float = 0.0):
    return make_duopoly((r, d))


@functools.lru_cache(maxsize=None)
def coordination(a: float = 0.0):
    return make_coordination(a)


@pytest.fixture(scope="session")
def low_r():
    return duopoly(0.8, 0.0)


@pytest.fixture(scope="session")
def high_r():
    return duopoly(1.2, 0.0)


@pytest.fixture(scope="session")
def coord():
    return coordination(0.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for text in mod.summary_lines():
        terminalreporter.write_line(text)
