import os

import pytest
from hypothesis import HealthCheck, settings

from charp.irreducibles import CharacterEngine
from charp.roots import GroupConfig

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def a5():
    """One memoized A5, p = 3 engine shared by every test, so rows are computed once."""
    return CharacterEngine(GroupConfig(5, 3))


@pytest.fixture(scope="session")
def a2():
    return CharacterEngine(GroupConfig(2, 3))


CRITERIA = {
    1: "worked weight-space ranks",
    2: "decomposition rows and their mirror",
    3: "reference decomposition tables",
    4: "irreducible Weyl modules",
    5: "x exponents stay restricted",
    6: "consistency checks",
    7: "Gram-rank oracle",
    8: "straightening soundness",
    9: "Steinberg tensor product",
    10: "memoization saves applies",
    11: "orbit sums add up to Weyl dimensions",
}
_criterion_outcomes: dict[int, list[str]] = {}
_criterion_notes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test decides")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criterion_outcomes.setdefault(marker, []).append(report.outcome)
    if report.when == "call":
        _criterion_notes.setdefault(marker, []).extend(f"{k}: {v}" for k, v in report.user_properties)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criterion_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, name in CRITERIA.items():
        outcomes = _criterion_outcomes.get(n)
        if not outcomes:
            verdict = "FAIL (not run)"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}  {verdict:15s} {name}")
        for note in _criterion_notes.get(n, []):
            terminalreporter.write_line(f"              {note}")
