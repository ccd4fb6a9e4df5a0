import logging
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))
logging.getLogger("hyperturan").setLevel(logging.ERROR)

from acceptance_log import LINES  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
