"""Shared pass/fail log for the acceptance suite, printed at the end of the session."""

import time
from contextlib import contextmanager

RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, budget: float, note: str = ""):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        _record(f"criterion {number}: FAIL  {title} ({elapsed:.1f}s) :: {reason[:160]}")
        raise
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        _record(f"criterion {number}: FAIL  {title} ({elapsed:.1f}s > budget {budget:.0f}s)")
        raise AssertionError(f"criterion {number} exceeded its {budget}s budget: {elapsed:.1f}s")
    _record(f"criterion {number}: PASS  {title} ({elapsed:.1f}s){' :: ' + note if note else ''}")


def _record(line: str) -> None:
    RESULTS.append(line)
    print(line)
