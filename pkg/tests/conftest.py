"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from contextlib import contextmanager

RESULTS = {}


@contextmanager
def criterion(number, description):
    """Record pass/fail for an acceptance criterion around a test body."""
    try:
        yield
    except BaseException:
        RESULTS[number] = (description, False)
        raise
    RESULTS[number] = (description, True)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        description, ok = RESULTS[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {description}")
