import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wgraphs.coxeter import CoxeterSystem

SYSTEM_DIR = Path(__file__).parent.parent / "systems"

_MATRICES = {
    "a1": ((1,),),
    "a2": ((1, 3), (3, 1)),
    "a3": ((1, 3, 2), (3, 1, 3), (2, 3, 1)),
    "b2": ((1, 4), (4, 1)),
    "b3": ((1, 4, 2), (4, 1, 3), (2, 3, 1)),
    "i2_5": ((1, 5), (5, 1)),
}


@pytest.fixture(scope="session")
def systems():
    """One shared instance per type so element tables are built once."""
    out = {name: CoxeterSystem(matrix) for name, matrix in _MATRICES.items()}
    out["b2_unequal"] = CoxeterSystem(_MATRICES["b2"], (1, 2))
    return out


@pytest.fixture(scope="session")
def system_dir():
    return SYSTEM_DIR
