"""Shared pytest plumbing: the acceptance verdict report.

Acceptance tests record one verdict line each through the
acceptance_log fixture; the terminal summary replays them after the
test results so the lines are visible in a default (captured) run.
"""

import pytest

_lines = []


@pytest.fixture
def acceptance_log():
    return _lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _lines:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance", sep="-")
        for line in _lines:
            terminalreporter.write_line(line)
