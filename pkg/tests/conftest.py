import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from liecurv.report import family_problem, run_analysis  # noqa: E402


@pytest.fixture(scope="session")
def g45():
    return run_analysis(family_problem("g4.5"))


@pytest.fixture(scope="session")
def g46():
    return run_analysis(family_problem("g4.6"))


@pytest.fixture(scope="session", params=["g4_5", "g4_6"])
def family_analysis(request, g45, g46):
    return request.param, (g45 if request.param == "g4_5" else g46)


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    mark = getattr(report, "criterion", None)
    if mark is not None:
        _criteria[mark] = "PASS" if report.passed else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), status in sorted(_criteria.items()):
        terminalreporter.write_line(f"{status} criterion {num}: {title}")
