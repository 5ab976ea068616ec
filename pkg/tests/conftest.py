import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_IDS = range(1, 9)
_results: dict = {}


@pytest.fixture
def acceptance():
    """record(n, ok, detail): a criterion passes only if every recorded part passes."""
    def record(n: int, ok: bool, detail: str = ""):
        prev_ok, prev_detail = _results.get(n, (True, ""))
        detail = "; ".join(d for d in (prev_detail, detail) if d)
        _results[n] = (prev_ok and bool(ok), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in ACCEPTANCE_IDS:
        ok, detail = _results.get(n, (False, "not run"))
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call" and report.failed:
        n = marker.args[0]
        _, detail = _results.get(n, (True, ""))
        _results[n] = (False, "; ".join(d for d in (detail, f"{item.name} failed") if d))
