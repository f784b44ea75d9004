import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """record(k, ok, detail) stores the outcome line for acceptance criterion k."""

    def _record(k, ok, detail=""):
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        ACCEPTANCE[k] = line
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" or not rep.failed:
        return
    k = mark.args[0]
    if "PASS" in ACCEPTANCE.get(k, "PASS"):
        ACCEPTANCE[k] = f"criterion {k}: FAIL ({item.name} raised)"
