import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from severi.jordan import JordanSpace

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def spaces():
    cache = {}

    def get(model, field=31991):
        if (model, field) not in cache:
            cache[model, field] = JordanSpace(model, field)
        return cache[model, field]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
