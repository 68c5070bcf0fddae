import pytest

_lines = []


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: long-running paper-scale checks (opt-in)")


@pytest.fixture
def report():
    """Record one acceptance line: ``report(number, ok, detail)``."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _lines.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_lines):
            terminalreporter.write_line(line)
