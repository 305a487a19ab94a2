import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("zm", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("zm")

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them in order after the run."""

    def record(n, ok, text):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
        _LINES.append((n, line))
        print(line)
        return ok

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES, key=lambda x: x[0]):
        terminalreporter.write_line(line)
