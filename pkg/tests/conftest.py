import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}   # nodeid -> (number, description)
_OUTCOME = {}    # number -> passed so far


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, description): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = tuple(m.args)


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    number = _CRITERIA[report.nodeid][0]
    ok = not report.failed and not (report.when == "call" and report.skipped)
    _OUTCOME[number] = _OUTCOME.get(number, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    descriptions = {}
    for number, text in _CRITERIA.values():
        descriptions.setdefault(number, text)
    terminalreporter.section("acceptance criteria")
    for number in sorted(descriptions):
        if number not in _OUTCOME:
            status = "NOT RUN"
        else:
            status = "PASS" if _OUTCOME[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}: {descriptions[number]}")
