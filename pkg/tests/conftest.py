import pytest

from surfspec import fixtures

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def pinned():
    return fixtures.load_pinned()


@pytest.fixture(scope="session")
def report():
    """Collects one summary line per acceptance criterion."""
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
