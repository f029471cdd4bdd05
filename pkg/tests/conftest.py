import re

import pytest

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, list] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    entry = _results.setdefault(int(m.group(1)), [True, []])
    entry[0] = entry[0] and report.outcome == "passed"
    entry[1].extend(v for k, v in report.user_properties if k == "detail")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        ok, details = _results[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}"
        if details:
            line += " - " + "; ".join(details)
        terminalreporter.write_line(line)


@pytest.fixture
def detail(record_property):
    """Attach a one-line note to the acceptance summary of this criterion."""
    def add(text):
        record_property("detail", text)
    return add
