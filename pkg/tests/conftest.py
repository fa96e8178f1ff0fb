import math
from pathlib import Path

import pytest

from delzant_corners import catalog
from delzant_corners.subspace import AffineSubspace

ROOT = Path(__file__).resolve().parents[1]
POLYTOPES = ROOT / "polytopes"
LOG2 = math.log(2)


@pytest.fixture(scope="session")
def cp2():
    return catalog.projective_plane()


@pytest.fixture(scope="session")
def standard():
    return catalog.standard_catalog()


@pytest.fixture(scope="session")
def lines():
    """The five planar lines used in the intersection experiments, keyed 1..5."""
    return {
        1: AffineSubspace([(1, 0)]),
        2: AffineSubspace([(0, 1)]),
        3: AffineSubspace([(1, 1)], (LOG2, 0)),
        4: AffineSubspace([(1, -1)], (-LOG2, 0)),
        5: AffineSubspace([(1, 1)], (-LOG2, 0)),
    }


@pytest.fixture(scope="session")
def polytope_dir():
    return POLYTOPES


_CRITERIA: dict[int, bool] = {}


@pytest.fixture
def record():
    """Store one pass/fail outcome per acceptance criterion."""
    def _record(number: int, ok: bool):
        _CRITERIA[number] = bool(ok)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
