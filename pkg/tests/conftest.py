import math
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240611)


def off_axis_points(rng, n, x0=(-2.0, 2.0), rho=(0.1, 3.0)):
    """n random 3-D points whose meridian projection lies in the given ranges."""
    out = []
    for _ in range(n):
        r = rng.uniform(*rho)
        th = rng.uniform(0.0, 2.0 * math.pi)
        out.append((rng.uniform(*x0), r * math.cos(th), r * math.sin(th)))
    return out


def builtin_fields():
    """(name, field) for every built-in family used across the test suite."""
    from meridian.families import exponential, joukowski, xsq_plus_c
    from meridian.separable import GaspSeries, GaspTerm, gasp_field

    out = [
        ("joukowski", joukowski(1.0, 1.0)),
        ("exponential", exponential(1.0, 0.6, -0.8)),
        ("xsq_plus_c", xsq_plus_c(1.0)),
    ]
    for a in (0.0, 1.0, 2.0, 3.0):
        s = GaspSeries(a, [GaspTerm(1.0, 1.0, 0.3, 1.0, 0.4), GaspTerm(2.2, -0.5, 0.8, 0.6, 0.0)])
        out.append((f"gasp{a:g}", gasp_field(s)))
    return out


ACCEPTANCE: dict = {}


def record_criterion(n: int, ok: bool, detail: str) -> None:
    """Store one acceptance line; printed in the terminal summary."""
    ACCEPTANCE[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE[n])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
