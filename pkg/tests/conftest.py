import re

ACCEPTANCE_FILE = "test_acceptance.py"
_CRITERION = re.compile(r"test_criterion_(\d+)")
_outcomes: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_outcomes):
        ok = all(o == "passed" for o in _outcomes[k])
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
