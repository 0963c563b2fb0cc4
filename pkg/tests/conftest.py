"""Shared pytest wiring: the acceptance-criteria summary block.

test_acceptance.py records one line per headline criterion in
acceptance_log.ACCEPTANCE_LINES; printing them from a terminal-summary
hook keeps them visible in a default (captured) pytest run instead of
only under -s.
"""

from acceptance_log import ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
