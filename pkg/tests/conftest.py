import numpy as np
import pytest

from partition_mac.core import AccessMatrix

EXAMPLE_ROWS = [[1, 0, 1], [1, 0, 0], [0, 1, 1], [0, 0, 0]]


@pytest.fixture
def example_matrix():
    return AccessMatrix(np.array(EXAMPLE_ROWS))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1].removeprefix("test_criterion_")
        _ACCEPTANCE[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, duration = _ACCEPTANCE[name]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        num, _, label = name.partition("_")
        terminalreporter.write_line(f"criterion {int(num):2d} {label:<28} {verdict}  ({duration:.2f} s)")
