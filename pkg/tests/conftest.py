from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from d4sylow.classes import cached_classes
from d4sylow.gf import field_make

settings.register_profile("d4", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("d4")


@pytest.fixture(scope="session")
def F2():
    return field_make(2)


@pytest.fixture(scope="session")
def F3():
    return field_make(3)


@pytest.fixture(scope="session")
def F4():
    return field_make(2, 2)


@pytest.fixture(scope="session")
def cd2(F2):
    return cached_classes(F2)


@pytest.fixture(scope="session")
def cd3(F3):
    return cached_classes(F3)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(verdicts):
        terminalreporter.write_line(verdicts[n])
