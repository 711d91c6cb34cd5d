import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: list[str] = []


class Criterion:
    """Times one acceptance criterion and records a PASS/FAIL line."""

    def __init__(self, number: int, title: str, limit_s: float | None):
        self.number, self.title, self.limit_s = number, title, limit_s
        self.checks: list[tuple[str, bool]] = []
        self.elapsed = 0.0
        self._t0 = None

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed += time.perf_counter() - self._t0
        return False

    def check(self, label: str, ok: bool) -> bool:
        self.checks.append((label, bool(ok)))
        return bool(ok)

    def finish(self, note: str = "") -> bool:
        if self.limit_s is not None:
            self.check(f"runtime {self.elapsed:.2f} s < {self.limit_s:g} s", self.elapsed < self.limit_s)
        ok = all(c for _, c in self.checks) and bool(self.checks)
        detail = "; ".join(f"{lbl} [{'ok' if c else 'FAILED'}]" for lbl, c in self.checks)
        line = f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} -- {detail}"
        if note:
            line += f" ({note})"
        print(line)
        _ACCEPTANCE.append(line)
        return ok


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
