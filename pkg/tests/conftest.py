import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cgl.pencil import pencil_discriminant, worked_example

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def example():
    return worked_example()


@pytest.fixture(scope="session")
def example_delta(example):
    return pencil_discriminant(example.pencil).delta


@pytest.fixture(scope="session")
def golden():
    def load(name):
        return json.loads((GOLDEN / name).read_text())

    return load


# one PASS/FAIL line per acceptance criterion in the terminal summary
_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::test_")[-1]
    if report.failed:
        _CRITERIA[name] = "FAIL"
    elif report.skipped:
        _CRITERIA.setdefault(name, "SKIP")
    elif report.when == "call":
        _CRITERIA.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[1])):
        number, _, label = name.removeprefix("criterion_").partition("_")
        terminalreporter.write_line(f"criterion {number} ({label.replace('_', ' ')}): {_CRITERIA[name]}")
