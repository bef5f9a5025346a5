import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

LONG = os.environ.get("QSA_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set QSA_LONG=1 to enable")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    log = sys.modules.get("acceptance_log")
    if log is None or not log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in log.RESULTS.values():
        terminalreporter.write_line(line)
