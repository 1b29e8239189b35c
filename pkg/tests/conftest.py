import functools
import math
import time
import warnings

import numpy as np
import pytest
from hypothesis import settings

from ramplab.analytic import FamilyKind, RampFamily, sample_family
from ramplab.forces import icho
from ramplab.ramp_law import RampConfig

settings.register_profile("ramplab", deadline=None, max_examples=60)
settings.load_profile("ramplab")


@functools.lru_cache(maxsize=None)
def sampled(kind: str, mu: float, v: float, h: float = 1e-3, **params):
    """Cached arc-length sample of a closed-form family member."""
    family = RampFamily(FamilyKind(kind), RampConfig(mu, v), **params)
    return sample_family(family, h)


def quiet_residual(curve, force, cfg):
    from ramplab.ramp_law import ramp_residual

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ramp_residual(curve, force, cfg)


def circle_points(R=1.0, n=2000, center=(0.0, 0.0), ccw=True):
    th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    if not ccw:
        th = -th
    return np.column_stack([center[0] + R * np.cos(th), center[1] + R * np.sin(th)])


@pytest.fixture
def force():
    return icho()


# -- acceptance reporting -------------------------------------------------------

SUITE_BUDGET_S = 60.0
ACCEPTANCE_LINES: list[str] = []
_session_start = [0.0]


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    """Log one PASS/FAIL line for an acceptance criterion and return ``ok``."""
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_sessionstart(session):
    _session_start[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    elapsed = time.perf_counter() - _session_start[0]
    lines = list(ACCEPTANCE_LINES)
    if lines:
        lines.append(
            f"{'PASS' if elapsed < SUITE_BUDGET_S else 'FAIL'}  criterion 10 (runtime): "
            f"full suite {elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s"
        )
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
