import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line, then assert it."""

    def report(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
        _LINES.append((number, line))
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES):
        terminalreporter.write_line(line)
