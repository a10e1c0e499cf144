_CRITERIA: dict[str, tuple[int, str]] = {}
_OUTCOMES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    number, _ = _CRITERIA[report.nodeid]
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed:
        _OUTCOMES[number] = "FAIL"
    elif report.when == "call":
        _OUTCOMES.setdefault(number, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in sorted(set(_CRITERIA.values())):
        status = _OUTCOMES.get(number, "NOT RUN")
        terminalreporter.write_line(f"criterion {number:>2} {status:<7} {title}")
