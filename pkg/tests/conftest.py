from __future__ import annotations

import sys
from collections import defaultdict
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("repo")

_CRITERIA: dict[int, str] = {}
_OUTCOMES: dict[int, list[tuple[str, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA[number] = title


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _OUTCOMES[mark.args[0]].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        results = _OUTCOMES.get(number, [])
        failed = [name for name, outcome in results if outcome != "passed"]
        if not results:
            status = "NOT RUN"
        elif failed:
            status = "FAIL"
        else:
            status = "PASS"
        line = f"criterion {number:>2} {status:<7} {_CRITERIA[number]} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += ": failed " + ", ".join(failed)
        terminalreporter.write_line(line)
