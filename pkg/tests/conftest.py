import pytest
from hypothesis import settings

from oracles import LegendreTables

# Factoring time varies a lot between draws; correctness, not latency, is under test.
settings.register_profile("default", deadline=None)
settings.load_profile("default")

_CRITERIA_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-domain sweeps that take tens of seconds")


@pytest.fixture(scope="session")
def legendre_tables():
    return LegendreTables(10**4)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA_RESULTS[number] = (title, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA_RESULTS):
        title, outcome, duration = _CRITERIA_RESULTS[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}  ({duration:.1f} s)")
