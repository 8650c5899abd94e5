import numpy as np
import pytest

from specshort import DEFAULT_TOL


@pytest.fixture
def tol():
    return DEFAULT_TOL


def min_eig(a):
    a = np.asarray(a)
    return float(np.linalg.eigvalsh(a).min()) if a.size else 0.0


def max_abs(a):
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def same_subspace(s, t, tol=1e-9):
    """Two subspaces are equal iff their orthogonal projections agree."""
    return max_abs(s.projection() - t.projection()) <= tol
