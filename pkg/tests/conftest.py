import pytest

_LINES: dict = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion, printed in the terminal summary."""
    def record(number: int, ok: bool, detail: str = "") -> bool:
        _LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
