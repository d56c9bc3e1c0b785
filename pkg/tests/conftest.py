import sys
from pathlib import Path

import pytest
import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from darbouxkit import expr as ex  # noqa: E402
from darbouxkit.syntax import parse_operator  # noqa: E402

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def L_invertible():
    return parse_operator("Dx*Dy^2 + Dx^2 + x*Dx + 1")


@pytest.fixture
def L_finite():
    return parse_operator("Dx^2*Dy + Dy^2*Dx - 1/x*Dy^2 + Dy")


@pytest.fixture
def L_sine():
    return parse_operator("Dx^2*Dy + y*Dx^2 + x*Dy^2 + 1")


@pytest.fixture
def psi_sine():
    return sp.sin(ex.y / sp.sqrt(ex.x))


# -- acceptance summary -------------------------------------------------------

_CRITERIA = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    _OUTCOMES[report.nodeid] = _OUTCOMES.get(report.nodeid, True) and not report.failed


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_CRITERIA.items(), key=lambda kv: kv[1][0]):
        if nodeid in _OUTCOMES:
            status = "PASS" if _OUTCOMES[nodeid] else "FAIL"
            terminalreporter.write_line(f"criterion {number:>2}  {status}  {title}")
