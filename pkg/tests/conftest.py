import pytest

_CRITERIA = {}  # nodeid -> [number, title, outcome, detail]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            num, title = mark.args
            _CRITERIA[item.nodeid] = [num, title, "not run", ""]


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to the criterion line."""
    def put(text):
        if request.node.nodeid in _CRITERIA:
            _CRITERIA[request.node.nodeid][3] = text
    return put


def pytest_runtest_logreport(report):
    entry = _CRITERIA.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry[2] = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, outcome, text in sorted(_CRITERIA.values()):
        line = f"[{outcome}] {num:2d}. {title}"
        if text:
            line += f" -- {text}"
        terminalreporter.write_line(line)
