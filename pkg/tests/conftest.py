import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, value, tolerance, passed)."""
    def record(label, value, tolerance, passed):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {value:.3g} (tolerance {tolerance:.3g})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
