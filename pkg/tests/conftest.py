from __future__ import annotations

from collections import defaultdict

import pytest

from gpstopo.ingest import fixture_path, load_aliases, load_edges, load_nodes

_CRITERIA: dict[int, str] = {}
_OUTCOMES: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        number, title = marker
        _CRITERIA[number] = title
        _OUTCOMES[number].append(report.passed)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        verdict = "PASS" if all(_OUTCOMES[number]) else "FAIL"
        runs = len(_OUTCOMES[number])
        terminalreporter.write_line(
            f"criterion {number}: {verdict}  {_CRITERIA[number]} ({runs} check{'s' * (runs > 1)})"
        )


@pytest.fixture(scope="session")
def academic_nodes():
    return load_nodes(fixture_path("academicnet_nodes.csv"))


@pytest.fixture(scope="session")
def academic_edges():
    return load_edges(fixture_path("academicnet_edges.csv"))


@pytest.fixture(scope="session")
def aliases():
    return load_aliases(fixture_path("aliases.csv"))


@pytest.fixture(scope="session")
def table5_first():
    return load_edges(fixture_path("table5_first.csv"))


@pytest.fixture(scope="session")
def table5_second():
    return load_edges(fixture_path("table5_second.csv"))
