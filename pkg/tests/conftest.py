import pytest

_RESULTS: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    _RESULTS.append((marker.args[0], "PASS" if report.passed else "FAIL", detail))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion, reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, status, detail in sorted(_RESULTS, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"criterion {int(cid):2d}: {status}  {detail}")
