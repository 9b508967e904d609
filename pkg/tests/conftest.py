import re

# criterion number -> (status, one-line summary), filled as acceptance tests run
_criteria = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m or report.when != "call":
        return
    summary = dict(report.user_properties).get("summary", "")
    _criteria[int(m.group(1))] = ("PASS" if report.passed else "FAIL", summary)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        status, summary = _criteria[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {summary}")
