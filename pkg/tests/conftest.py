import pytest

_criteria: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    failed = rep.failed or (rep.when == "setup" and rep.skipped)
    if rep.when == "call" or failed:
        _criteria[number] = (title, "FAIL" if failed else "PASS", call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, seconds = _criteria[number]
        terminalreporter.write_line(f"{status} [{number:2d}] {title} ({seconds:.1f} s)")
