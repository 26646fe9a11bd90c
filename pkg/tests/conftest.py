import numpy as np
import pytest

from lcq.mc import McSpec


@pytest.fixture
def small_mc():
    return McSpec(samples=256, seed=11, inner_samples=1024, volume_samples=40_000, mass_samples=200_000)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one pass/fail line per acceptance criterion, filled by tests/test_acceptance.py
CRITERIA: dict[int, list] = {}


@pytest.fixture
def criterion():
    def record(num: int, ok: bool, detail: str = ""):
        CRITERIA.setdefault(num, []).append((bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        parts = CRITERIA[num]
        ok = all(p[0] for p in parts)
        detail = "; ".join(d for _, d in parts if d)
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
