from collections import defaultdict

import pytest

_criteria: dict = {}
_outcomes: dict = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _criteria[number] = title
    if report.when == "call" or report.failed or report.skipped:
        # setup/teardown only count when they go wrong
        _outcomes[number].append(report.passed and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes[number]
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"AC{number:<2} {verdict}  {_criteria[number]} ({sum(results)}/{len(results)} checks)")
