import numpy as np
import pytest

ACCEPTANCE = {}


def record(criterion: int, passed: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (bool(passed), detail)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
