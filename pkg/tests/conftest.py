import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from irs_aser import ModulationScheme

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

S = ModulationScheme

SCHEMES = {
    "bpsk": S.bpsk(),
    "4x2": S.rqam(4, 2, 1.0),
    "8x4": S.rqam(8, 4, 1.0),
    "16x2": S.rqam(16, 2, 1.0),
    "16x2b8": S.rqam(16, 2, 8.0),
    "8x4b.25": S.rqam(8, 4, 0.25),
    "sqam16": S.sqam(16),
    "sqam64": S.sqam(64),
    "xqam32": S.xqam(32),
    "xqam128": S.xqam(128),
    "xqam512": S.xqam(512),
    "xqam2048": S.xqam(2048),
}


@pytest.fixture(params=sorted(SCHEMES), ids=sorted(SCHEMES))
def scheme(request):
    return SCHEMES[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Acceptance lines are gathered here and echoed in the terminal summary so that
# `pytest` shows one verdict per criterion even when output is captured.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


HALF_PI = 0.5 * math.pi
