"""Shared test plumbing: the acceptance-criteria summary block."""

from contextlib import contextmanager

ACCEPTANCE_LINES = []


@contextmanager
def criterion(number, name):
    """Record one acceptance criterion's outcome for the terminal summary."""
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append((number, f"ACCEPTANCE {number} ({name}): FAIL"))
        raise
    ACCEPTANCE_LINES.append((number, f"ACCEPTANCE {number} ({name}): PASS"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
