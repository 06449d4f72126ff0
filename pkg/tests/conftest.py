import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from quivaut.exactfield import PrimeField, RationalField, set_field

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def rational_field():
    """Every test starts over Q; tests that switch fields get restored afterwards."""
    set_field(RationalField())
    yield
    set_field(RationalField())


@pytest.fixture(params=["Q", "F101"])
def any_field(request):
    F = RationalField() if request.param == "Q" else PrimeField(101)
    set_field(F)
    return F


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs a whole invariant battery")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
