import math
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from caustics import circle, ellipse, make_model

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

E05_B = math.sqrt(0.75)


@pytest.fixture(scope="session")
def circle1():
    """Unit-perimeter circle."""
    return circle()


@pytest.fixture(scope="session")
def unit_circle():
    return circle(2 * math.pi)


@pytest.fixture(scope="session")
def ellipse_half():
    """a = 1, b = 0.5, perimeter-normalized."""
    return ellipse(1.0, 0.5)


@pytest.fixture(scope="session")
def ellipse_e05():
    return ellipse(1.0, E05_B)


@pytest.fixture(scope="session")
def birkhoff_circle(circle1):
    return make_model("birkhoff", circle1)


@pytest.fixture(scope="session")
def birkhoff_ellipse(ellipse_half):
    return make_model("birkhoff", ellipse_half)


# --------------------------------------------------------------------------
# acceptance report: one line per criterion, built from the case outcomes

CRITERIA = {
    1: "circle completeness (Birkhoff, outer, symplectic)",
    2: "twist intervals within 2e-2 at margin 1e-3",
    3: "generating-function contracts on 32x32 grids",
    4: "Poncelet acceptance, ellipse e=0.5, rotation (1,3)",
    5: "rotation-1/2 rejection, e in {0.1, 0.3, 0.5}",
    6: "family classifications",
    7: "certification of every accepted graph",
    8: "outer-billiard ellipse orbits lie on conics",
    9: "CLI output byte-identical for --workers 1 and 8",
}
_outcomes: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    cases = _outcomes.setdefault(mark.args[0], {})
    cases[item.nodeid] = cases.get(item.nodeid, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_outcomes):
        cases = _outcomes[n]
        ok = sum(cases.values())
        status = "PASS" if ok == len(cases) else "FAIL"
        tr.write_line(f"[{status}] criterion {n}: {CRITERIA.get(n, '')} ({ok}/{len(cases)} cases)")
        for nodeid, passed in cases.items():
            if not passed:
                tr.write_line(f"         failing case: {nodeid.split('::', 1)[1]}")
