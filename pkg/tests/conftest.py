import random

import pytest

from qcdecision.decision import ScenarioParams

_criteria: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_logreport(report):
    if not (report.when == "call" or (report.when == "setup" and report.failed)):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        variant = report.nodeid[report.nodeid.index("["):] if "[" in report.nodeid else ""
        _criteria.append((marker[0], marker[1] + (f" {variant}" if variant else ""),
                          "PASS" if report.passed else "FAIL"))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark:
        item.user_properties.append(("criterion", (mark.args[0], mark.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, outcome in sorted(_criteria, key=lambda c: int(c[0])):
        terminalreporter.write_line(f"AC{int(number):02d} {outcome}  {text}")


def random_scenario(rng: random.Random, **overrides) -> ScenarioParams:
    values = dict(
        r1=rng.uniform(0, 0.5), r2=rng.uniform(0, 0.5), r3=rng.uniform(0, 0.5),
        c1=rng.uniform(0, 100), c2=rng.uniform(0, 100), c3=rng.uniform(0, 100),
        t1=rng.uniform(0, 100), t2=rng.uniform(0, 100), t3=rng.uniform(0, 100),
        h1=rng.uniform(0, 100), m=rng.uniform(0, 100), w=rng.uniform(0, 100),
        n11=rng.uniform(1, 1000), n12=rng.uniform(1, 1000),
    )
    values.update(overrides)
    return ScenarioParams(**values)


WORKED = ScenarioParams(
    r1=0.1, r2=0.1, r3=0.1, c1=4, c2=18, c3=6, t1=2, t2=3, t3=3,
    h1=5, m=6, w=56, n11=100, n12=100,
)


@pytest.fixture
def worked():
    return WORKED
