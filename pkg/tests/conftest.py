import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = (mark.args[0], mark.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    num = _criteria[report.nodeid][0]
    if report.failed:
        _outcomes[num] = "FAIL"
    elif report.when == "call" and report.passed:
        _outcomes.setdefault(num, "PASS")
    elif report.skipped:
        _outcomes.setdefault(num, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, title in sorted(_criteria.values()):
        status = _outcomes.get(num, "NOT RUN")
        terminalreporter.write_line(f"{status:<7} criterion {num:>2}: {title}")
