"""Collects outcomes of tests marked ``acceptance(n)`` and prints one line per criterion."""

import time
from collections import defaultdict

import pytest

SUITE_BUDGET_S = 300.0

_outcomes: dict[int, list[tuple[str, bool]]] = defaultdict(list)
_criterion_of: dict[str, int] = {}
_start = time.perf_counter()


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _criterion_of[item.nodeid] = int(mark.args[0])


def pytest_runtest_logreport(report):
    number = _criterion_of.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[number].append((report.nodeid, report.outcome == "passed"))


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    elapsed = time.perf_counter() - _start
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_outcomes):
        results = _outcomes[number]
        passed = sum(ok for _, ok in results)
        ok = passed == len(results)
        extra = ""
        if number == 10:
            within = elapsed <= SUITE_BUDGET_S
            ok = ok and within
            extra = f"; suite wall time {elapsed:.1f}s (budget {SUITE_BUDGET_S:.0f}s)"
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} ({passed}/{len(results)} tests){extra}")
        for nodeid, good in results:
            if not good:
                tr.write_line(f"    failed: {nodeid.split('::', 1)[-1]}")
