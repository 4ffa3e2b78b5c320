import pytest

_CRITERION_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.name.startswith("test_criterion_"):
        label = item.name.removeprefix("test_criterion_").replace("_", " ")
        _CRITERION_RESULTS.append((label, report.passed))


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    if not _CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed in sorted(_CRITERION_RESULTS):
        terminalreporter.write_line(
            f"criterion {label}: {'PASS' if passed else 'FAIL'}"
        )
