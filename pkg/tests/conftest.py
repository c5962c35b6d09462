import time

import pytest

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_outcome = rep


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion; its PASS/FAIL line is printed at the end of the run."""
    info = {}

    def start(number, claim):
        info.update(number=number, claim=claim, t0=time.perf_counter())

    yield start
    if not info:
        return
    rep = getattr(request.node, "call_outcome", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    line = f"{info['number']:2d}. {info['claim']}: {status} ({time.perf_counter() - info['t0']:.2f} s)"
    print(line)
    _CRITERIA.append((info["number"], line))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
