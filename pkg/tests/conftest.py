"""Shared fixtures: a memoized table builder and the acceptance report.

Algebra tables are pure functions of (g, k, variant), so tests share one
cache across the whole session; the biggest table (g=3, k=3, full) takes
several seconds to build and is needed by more than one module.

Acceptance tests wrap their body in the ``criterion`` context manager,
which records a pass/fail line (with wall time) whether or not the body
raises; the lines are printed in a terminal section after the run.
"""

from __future__ import annotations

import time
from contextlib import contextmanager

from strandfloer.circle import standard_matching
from strandfloer.strands import AlgebraTable

_TABLES: dict[tuple[int, int, str], AlgebraTable] = {}
_ACCEPTANCE: list[tuple[int, str, bool, float]] = []


def build_table(g: int, k: int, variant: str = "full") -> AlgebraTable:
    key = (g, k, variant)
    if key not in _TABLES:
        _TABLES[key] = AlgebraTable.build(standard_matching(g), k, variant)
    return _TABLES[key]


@contextmanager
def criterion(num: int, text: str):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        _ACCEPTANCE.append((num, text, ok, time.perf_counter() - t0))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, text, ok, secs in sorted(_ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {text} ({secs:.2f}s)")
