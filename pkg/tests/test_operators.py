import numpy as np
import pytest

from simplexwave import (
    boundary,
    close_under_faces,
    from_simplices,
    laplacian,
    reorient,
    signed_adjacency,
)
from simplexwave.operators import hull_degrees

from conftest import as_dense, random_closed_complex

# the four signed adjacency matrices of the two-triangle complex (times 4),
# edge order e1=(1,2) e2=(1,3) e3=(2,3) e4=(2,4) e5=(3,4)
S1_COMB = np.array(
    [
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ],
    dtype=float,
)
R2 = np.sqrt(2.0)
S1_SYM = np.array(
    [
        [0, 2, -R2, 1, 0],
        [2, 0, R2, 0, 1],
        [-R2, R2, 0, R2, -R2],
        [1, 0, R2, 0, 2],
        [0, 1, -R2, 2, 0],
    ]
) / 4.0
S1_WT = np.array(
    [
        [0, 2, -2, 1, 0],
        [2, 0, 2, 0, 1],
        [-2, 2, 0, 2, -2],
        [1, 0, 2, 0, 2],
        [0, 1, -2, 2, 0],
    ]
) / 4.0
S1_RW = np.array(
    [
        [0, 2, -2, 1, 0],
        [2, 0, 2, 0, 1],
        [-1, 1, 0, 1, -1],
        [1, 0, 2, 0, 2],
        [0, 1, -2, 2, 0],
    ]
) / 4.0


def test_boundary_columns(fig1):
    b0 = as_dense(boundary(fig1, 0).matrix)
    e1 = fig1.index_of(1, (1, 2))
    assert b0[fig1.index_of(0, (1,)), e1] == -1
    assert b0[fig1.index_of(0, (2,)), e1] == 1
    assert np.count_nonzero(b0[:, e1]) == 2

    b1 = as_dense(boundary(fig1, 1).matrix)
    t1 = fig1.index_of(2, (1, 2, 3))
    col = b1[:, t1]
    assert col[fig1.index_of(1, (1, 2))] == 1
    assert col[fig1.index_of(1, (1, 3))] == -1
    assert col[fig1.index_of(1, (2, 3))] == 1
    assert np.count_nonzero(col) == 3


def test_boundary_empty_cases(fig1):
    assert boundary(fig1, 2).shape == (2, 0)
    assert boundary(fig1, -1).shape == (0, 4)
    c = close_under_faces([{1, 2}, {2, 3}])
    assert boundary(c, 1).shape == (2, 0)
    with pytest.raises(IndexError):
        boundary(fig1, 3)


def test_boundary_of_boundary_exactly_zero():
    rng = np.random.default_rng(5)
    for _ in range(10):
        c = random_closed_complex(rng, weighted=True)
        for kappa in range(1, c.kappa_max + 1):
            lo = as_dense(boundary(c, kappa - 1).matrix)
            hi = as_dense(boundary(c, kappa).matrix)
            assert np.all(lo @ hi == 0.0)


def test_fig3_signed_adjacencies(fig1):
    expected = {
        "combinatorial": S1_COMB,
        "sym": S1_SYM,
        "wt": S1_WT,
        "rw": S1_RW,
    }
    for variant, matrix in expected.items():
        s = signed_adjacency(laplacian(fig1, 1, variant))
        assert np.abs(as_dense(s.matrix) - matrix).max() < 1e-12


def test_degrees_fig1(fig1):
    assert np.array_equal(hull_degrees(fig1, 1), [1, 1, 2, 1, 1])
    # for the vertex Laplacian the chain starts from stored edge weights
    l0 = laplacian(fig1, 0, "sym")
    assert np.array_equal(l0.degree_vector, [2, 3, 3, 2])


def test_signed_adjacency_zero_diagonal(fig1):
    for variant in ("combinatorial", "sym", "wt", "rw"):
        s = signed_adjacency(laplacian(fig1, 1, variant))
        assert np.all(as_dense(s.matrix).diagonal() == 0.0)


def test_kappa0_reduction_graph_laplacians():
    # weighted path 1-2-3, weights 2 and 3
    c = from_simplices([((1, 2), 1, 2.0), ((2, 3), 1, 3.0)])
    deg = np.array([2.0, 5.0, 3.0])
    adjacency = np.array([[0, 2, 0], [2, 0, 3], [0, 3, 0]], dtype=float)
    l_wt = as_dense(laplacian(c, 0, "wt").matrix)
    assert np.abs(l_wt - (np.diag(deg) - adjacency)).max() < 1e-12
    inv_sqrt = np.diag(1.0 / np.sqrt(deg))
    l_sym = as_dense(laplacian(c, 0, "sym").matrix)
    assert np.abs(l_sym - inv_sqrt @ l_wt @ inv_sqrt).max() < 1e-12
    l_rw = as_dense(laplacian(c, 0, "rw").matrix)
    assert np.abs(l_rw - np.diag(1.0 / deg) @ l_wt).max() < 1e-12
    # kappa=0 signed adjacency is the plain adjacency matrix
    s0 = signed_adjacency(laplacian(c, 0, "wt"))
    assert np.abs(as_dense(s0.matrix) - adjacency).max() < 1e-12


def test_reorient_identity_and_global_flip(fig1):
    n = fig1.size(1)
    l_ref = as_dense(laplacian(fig1, 1, "combinatorial").matrix)
    same = reorient(fig1, 1, np.ones(n))
    assert np.array_equal(
        as_dense(laplacian(same, 1, "combinatorial").matrix), l_ref
    )
    flipped = reorient(fig1, 1, -np.ones(n))
    assert np.array_equal(
        as_dense(laplacian(flipped, 1, "combinatorial").matrix), l_ref
    )


def test_reorient_conjugates_all_variants():
    rng = np.random.default_rng(17)
    for _ in range(6):
        c = random_closed_complex(rng, weighted=True)
        kappa = int(rng.integers(1, c.kappa_max + 1))
        n = c.size(kappa)
        p = rng.choice([-1.0, 1.0], size=n)
        flipped = reorient(c, kappa, p)
        pmat = np.diag(p)
        for variant in ("combinatorial", "sym", "wt", "rw"):
            before = as_dense(laplacian(c, kappa, variant).matrix)
            after = as_dense(laplacian(flipped, kappa, variant).matrix)
            assert np.abs(after - pmat @ before @ pmat).max() < 1e-12


def test_combinatorial_ignores_other_strata(fig1):
    l_ref = as_dense(laplacian(fig1, 1, "combinatorial").matrix)
    rng = np.random.default_rng(3)
    flipped = reorient(fig1, 0, rng.choice([-1.0, 1.0], size=4))
    flipped = reorient(flipped, 2, rng.choice([-1.0, 1.0], size=2))
    assert np.array_equal(
        as_dense(laplacian(flipped, 1, "combinatorial").matrix), l_ref
    )


def test_reorient_length_mismatch(fig1):
    with pytest.raises(ValueError):
        reorient(fig1, 1, np.ones(4))
    with pytest.raises(ValueError):
        reorient(fig1, 1, np.zeros(5))


def test_sym_positive_semidefinite():
    rng = np.random.default_rng(23)
    for _ in range(8):
        c = random_closed_complex(rng, weighted=True)
        for kappa in range(c.kappa_max + 1):
            mat = as_dense(laplacian(c, kappa, "sym").matrix)
            sym = (mat + mat.T) / 2
            assert np.linalg.eigvalsh(sym).min() >= -1e-10


def test_rw_equals_inverse_degree_times_wt(fig1):
    l_wt = laplacian(fig1, 1, "wt")
    l_rw = laplacian(fig1, 1, "rw")
    expected = np.diag(1.0 / l_wt.degree_vector) @ as_dense(l_wt.matrix)
    assert np.abs(as_dense(l_rw.matrix) - expected).max() < 1e-15


def test_explicit_orientations_match_reorient(fig1):
    # building with a flipped edge equals flipping the natural-built complex
    entries = []
    for kappa in range(fig1.kappa_max + 1):
        for s in fig1.stratum(kappa):
            p = -1 if s.vertices == (2, 3) else 1
            entries.append((s.vertices, p if kappa > 0 else 1, s.weight))
    built = from_simplices(entries)
    p = np.ones(5)
    p[fig1.index_of(1, (2, 3))] = -1.0
    flipped = reorient(fig1, 1, p)
    for variant in ("combinatorial", "sym", "wt", "rw"):
        a = as_dense(laplacian(built, 1, variant).matrix)
        b = as_dense(laplacian(flipped, 1, variant).matrix)
        assert np.abs(a - b).max() < 1e-15


def test_dangling_edge_degrees_guarded():
    # edge (1,4) has no triangle above it: raw degree zero, guarded to one
    c = close_under_faces([{1, 2, 3}, {1, 4}])
    raw = hull_degrees(c, 1)
    assert raw[c.index_of(1, (1, 4))] == 0.0
    l = laplacian(c, 1, "sym")
    assert np.all(l.degree_vector > 0)
    assert np.all(np.isfinite(as_dense(l.matrix)))
    # the dangling edge still couples to its face-sharing neighbors
    row = as_dense(l.matrix)[c.index_of(1, (1, 4))]
    assert np.count_nonzero(np.abs(row) > 1e-12) > 1
