from collections import OrderedDict

import pytest
from hypothesis import HealthCheck, settings

from rewrite_probe.synthetic import write_reading_corpus, write_retrieval_corpus

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_CRITERIA: "OrderedDict[str, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title): acceptance criterion this test checks"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "passed": 0})
    if report.failed:
        entry["failed"].append(item.name)
    elif report.when == "call":
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA, key=int):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"[{status}] {number}. {entry['title']}"
        if entry["failed"]:
            line += "  (failed: " + ", ".join(entry["failed"]) + ")"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def retrieval_paths(tmp_path_factory):
    return write_retrieval_corpus(tmp_path_factory.mktemp("retrieval"))


@pytest.fixture(scope="session")
def reading_paths(tmp_path_factory):
    return write_reading_corpus(tmp_path_factory.mktemp("reading"))
