import pytest

from mixedwalk.cyclo import FloatAngle, RationalAngle
from mixedwalk.graph import cycle, path


@pytest.fixture
def c3():
    return cycle(3)


@pytest.fixture
def p2():
    return path(2)


ETA0 = RationalAngle(0, 1)
ETA_QUARTER = RationalAngle(1, 4)  # pi/2
ETA_SIXTH = RationalAngle(1, 6)    # pi/3
ETA_FIFTH = RationalAngle(1, 5)    # 2pi/5
ETA_ONE_RAD = FloatAngle(1.0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
