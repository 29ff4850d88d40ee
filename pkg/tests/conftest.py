import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from sharedcanvas.fixtures import FIXTURES

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def manifests():
    return {name: build() for name, build in FIXTURES.items()}


@pytest.fixture(params=list(FIXTURES))
def fixture_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
