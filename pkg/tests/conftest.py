import numpy as np
import pytest

from simplexwave import close_under_faces, from_simplices


@pytest.fixture
def fig1():
    """Two triangles sharing an edge: vertices 1..4, 5 edges, 2 triangles."""
    return close_under_faces([{1, 2, 3}, {2, 3, 4}])


def make_strip21():
    """A fixed 21-triangle mesh: ten squares split in two plus an end cap."""
    tris = []
    for i in range(10):
        tris.append({2 * i, 2 * i + 2, 2 * i + 1})
        tris.append({2 * i + 2, 2 * i + 3, 2 * i + 1})
    tris.append({20, 21, 22})
    return close_under_faces(tris)


@pytest.fixture(scope="session")
def strip21():
    return make_strip21()


def random_closed_complex(rng, max_vertices=12, kappa_max=3, weighted=False):
    """Random face-closed complex from a handful of maximal simplices."""
    nv = int(rng.integers(4, max_vertices + 1))
    sets = []
    for _ in range(int(rng.integers(2, 9))):
        size = int(rng.integers(2, kappa_max + 2))
        verts = rng.choice(nv, size=min(size, nv), replace=False)
        sets.append(tuple(sorted(int(v) for v in verts)))
    c = close_under_faces(sets)
    if not weighted:
        return c
    entries = []
    for kappa in range(c.kappa_max + 1):
        for s in c.stratum(kappa):
            w = float(rng.uniform(0.5, 2.0))
            entries.append((s.vertices, 1, w))
    return from_simplices(entries)


def as_dense(matrix):
    import scipy.sparse as sp

    return matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
