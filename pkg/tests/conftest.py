from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import pytest


@dataclass
class Ledger:
    """Per-criterion outcomes of the acceptance suite, printed at the end of the run."""

    lines: dict[tuple[int, str], str] = field(default_factory=dict)

    @contextmanager
    def check(self, number: int, title: str, limit: float | None = None):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None:
                assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit:.0f} s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            bound = f" (limit {limit:.0f} s)" if limit is not None else ""
            self._put(number, title, f"{status}  {elapsed:7.2f} s{bound}")

    def expected_failure(self, number: int, title: str, detail: str) -> None:
        self._put(number, title, f"FAIL  expected: {detail}")

    def _put(self, number: int, title: str, text: str) -> None:
        line = f"criterion {number:>2} {title:<44} {text}"
        self.lines[(number, title)] = line
        print(line)


_LEDGER = Ledger()


@pytest.fixture(scope="session")
def acceptance() -> Ledger:
    return _LEDGER


def pytest_terminal_summary(terminalreporter):
    if not _LEDGER.lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_LEDGER.lines):
        terminalreporter.write_line(_LEDGER.lines[key])
