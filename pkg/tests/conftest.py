import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Time a block and record one PASS/FAIL line for it.

    The block fails if it raises or if it overruns ``budget`` seconds.
    """

    @contextmanager
    def run(number, title, budget=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            over = budget is not None and elapsed >= budget
            status = "PASS" if ok and not over else "FAIL"
            limit = f" < {budget}s" if budget is not None else ""
            line = f"{status} criterion {number}: {title} ({elapsed:.2f}s{limit})"
            _LINES.append(line)
            print(line)
        assert not over, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
