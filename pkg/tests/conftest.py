import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spherepack.selftest import four_simplex_boundary, sixteen_cell_boundary


@pytest.fixture(scope="session")
def pentatope():
    """Boundary of the 4-simplex: the 5-vertex triangulation of S^3."""
    return four_simplex_boundary()


@pytest.fixture(scope="session")
def cross_polytope():
    """Boundary of the 16-cell: 8 vertices, 16 tetrahedra."""
    return sixteen_cell_boundary()


@pytest.fixture
def rng():
    return np.random.default_rng(20230817)
