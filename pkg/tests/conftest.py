import pytest

_LINES = []


@pytest.fixture
def verdict():
    """Record one acceptance verdict line: verdict(number, ok, detail)."""

    def record(number, ok, detail):
        _LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
