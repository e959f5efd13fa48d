import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from setpairs.jsonio import load_system

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_NAMES = ["five_cycle", "triangle", "figure1", "power3", "power4"]


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20261018, help="seed for randomized checks")


@pytest.fixture
def rng(request):
    return random.Random(request.config.getoption("--seed"))


@pytest.fixture(scope="session")
def fixture_systems():
    return {name: load_system(FIXTURES / f"{name}.json") for name in FIXTURE_NAMES}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# -- acceptance summary --------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, text = mark.args
    _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {text}")
