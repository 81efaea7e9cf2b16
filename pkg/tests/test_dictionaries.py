import numpy as np
import pytest

from simplexwave import (
    build_tree,
    extract_haar,
    extract_walsh,
    ghwt,
    haar_basis,
    hglet,
    laplacian,
    reorder_f2c,
)
from simplexwave.dictionaries import basis_from_atoms, ghwt_coefficients
from simplexwave.partition import full_eigh_sorted

from conftest import as_dense, random_closed_complex
from test_partition import path_complex


@pytest.fixture(scope="module")
def strip_tree(strip21):
    return build_tree(strip21, 2)


def balanced_tree(n):
    return build_tree(path_complex(n), 0)


def check_level_onbs(d, tol=1e-10):
    n = d.n
    for j in range(d.j_max + 1):
        mat = d.level_basis(j).materialize()
        assert mat.shape == (n, n)
        assert np.abs(mat @ mat.T - np.eye(n)).max() < tol


def test_haar_two_elements():
    tree = balanced_tree(2)
    d = haar_basis(tree)
    mat = d.basis().materialize()
    s = 1 / np.sqrt(2)
    assert np.abs(mat[:, 0] - [s, s]).max() < 1e-15
    assert np.abs(mat[:, 1] - [s, -s]).max() < 1e-15


def test_haar_unbalanced_three():
    c = path_complex(3)
    tree = build_tree(c, 0)
    d = haar_basis(tree)
    atoms = {a.key: a.values for a in d.atoms()}
    split = next(
        tree.nodes[nid] for nid in tree.root.children if tree.nodes[nid].size == 2
    )
    # the difference atom over an unbalanced split carries the classic
    # weights sqrt(nb/(na n)) and sqrt(na/(nb n))
    root_atom = atoms[(0, 0, 1)]
    s6 = 1 / np.sqrt(6)
    if split.members == (0, 1):
        expected = np.array([s6, s6, -2 * s6])
    else:
        expected = np.array([2 * s6, -s6, -s6])
    assert np.abs(root_atom - expected).max() < 1e-12


def test_haar_orthonormal_and_sign_convention(strip_tree):
    d = haar_basis(strip_tree)
    mat = d.basis().materialize()
    assert mat.shape == (21, 21)
    assert np.abs(mat @ mat.T - np.eye(21)).max() < 1e-10
    # one atom per internal node plus the scaling atom
    assert d.atom_count() == 21
    for atom in d.atoms():
        if atom.l == 0:
            continue
        node = strip_tree.node(atom.j, atom.k)
        a, b = (strip_tree.nodes[i] for i in node.children)
        assert all(atom.values[list(a.members)] > 0)
        assert all(atom.values[list(b.members)] < 0)
        assert abs(atom.values.sum()) < 1e-12


def test_haar_weighted_identities(strip_tree):
    rng = np.random.default_rng(1)
    w = rng.uniform(0.5, 3.0, size=21)
    d = haar_basis(strip_tree, weights=w)
    mat = d.basis().materialize()
    gram = mat.T @ np.diag(w) @ mat
    assert np.abs(gram - np.eye(21)).max() < 1e-10
    for atom in d.atoms():
        if atom.l >= 1:
            assert abs(np.sum(w * atom.values)) < 1e-10


def test_haar_weight_validation(strip_tree):
    with pytest.raises(ValueError):
        haar_basis(strip_tree, weights=np.zeros(21))
    with pytest.raises(ValueError):
        haar_basis(strip_tree, weights=np.ones(5))


def test_hglet_level0_is_full_eigenbasis(strip21, strip_tree):
    d = hglet(strip_tree, strip21, "sym")
    w, v = full_eigh_sorted(as_dense(laplacian(strip21, 2, "sym").matrix))
    mat = d.level_basis(0).materialize()
    assert np.abs(mat - v).max() < 1e-10
    assert np.all(np.diff(d.block(0, 0).eigenvalues) >= -1e-12)


def test_hglet_leaf_level_standard_basis(strip21, strip_tree):
    d = hglet(strip_tree, strip21, "sym")
    mat = d.level_basis(strip_tree.j_max).materialize()
    perm = np.abs(mat)
    assert np.abs(perm - np.eye(21)[:, np.argmax(perm, axis=0)]).max() < 1e-12
    assert np.all(mat[mat != 0] > 0)


def test_hglet_level_onbs(strip21, strip_tree):
    check_level_onbs(hglet(strip_tree, strip21, "sym"))
    check_level_onbs(hglet(strip_tree, strip21, "combinatorial"))


def test_hglet_variant_validation(strip21, strip_tree):
    with pytest.raises(ValueError):
        hglet(strip_tree, strip21, "rw")


def test_ghwt_two_elements():
    d = ghwt(balanced_tree(2))
    mat = d.level_basis(0).materialize()
    s = 1 / np.sqrt(2)
    assert np.abs(np.abs(mat) - s).max() < 1e-15
    assert np.abs(mat[:, 0] - [s, s]).max() < 1e-15


def test_ghwt_balanced4_is_hadamard():
    d = ghwt(balanced_tree(4))
    mat = d.level_basis(0).materialize()
    hadamard = 0.5 * np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [1, -1, 1, -1],
            [1, -1, -1, 1],
        ]
    )
    found = {tuple(np.round(mat[:, i], 12)) for i in range(4)}
    expected_rows = {tuple(r) for r in hadamard} | {tuple(-r) for r in hadamard}
    assert found <= expected_rows
    assert len(found) == 4
    # all magnitudes equal for the balanced tree
    assert np.abs(np.abs(mat) - 0.5).max() < 1e-12


def test_ghwt_level_onbs(strip_tree):
    check_level_onbs(ghwt(strip_tree))


def test_ghwt_tag_count_conservation(strip_tree):
    d = ghwt(strip_tree)
    for j in range(d.j_max + 1):
        assert len(d.level_keys(j)) == 21


def test_ghwt_leaf_level_standard(strip_tree):
    d = ghwt(strip_tree)
    mat = d.level_basis(d.j_max).materialize()
    assert np.abs(np.sort(np.argmax(mat, axis=0)) - np.arange(21)).max() == 0
    assert np.all(mat[mat != 0] == 1.0)


def test_hglet_ghwt_matching_supports(strip21, strip_tree):
    dh = hglet(strip_tree, strip21, "sym")
    dg = ghwt(strip_tree)
    assert set(dh.blocks) == set(dg.blocks)
    for j, k in dh.blocks:
        assert np.array_equal(dh.block(j, k).support, dg.block(j, k).support)
        assert len(dh.block(j, k).tags) == len(dg.block(j, k).tags)
    # on this balanced mesh the tag values coincide as well
    keys_h = {key for j in range(dh.j_max + 1) for key in dh.level_keys(j)}
    keys_g = {key for j in range(dg.j_max + 1) for key in dg.level_keys(j)}
    assert keys_h == keys_g


def test_support_nesting(strip_tree):
    d = ghwt(strip_tree)
    tree = strip_tree
    for node in tree.nodes:
        if node.is_leaf:
            continue
        for cid in node.children:
            child = tree.nodes[cid]
            assert set(child.members) <= set(node.members)


def test_ghwt_coefficients_match_products(strip_tree):
    d = ghwt(strip_tree)
    rng = np.random.default_rng(6)
    for _ in range(5):
        f = rng.standard_normal(21)
        fast = ghwt_coefficients(d, f)
        for (j, k), blk in d.blocks.items():
            ref = blk.vectors.T @ f[blk.support]
            assert np.abs(fast[(j, k)] - ref).max() < 1e-12


def test_reorder_f2c(strip_tree):
    d = ghwt(strip_tree)
    f2c = reorder_f2c(d)
    assert f2c.ordering == "F2C"
    keys = f2c.keys()
    assert len(keys) == d.atom_count()
    # finest level first, each level sorted by tag then region
    assert keys[0][0] == d.j_max
    per_level = {}
    for j, k, l in keys:
        per_level.setdefault(j, []).append((l, k))
    for j, pairs in per_level.items():
        assert pairs == sorted(pairs)


def test_reorder_f2c_rejects_hglet(strip21, strip_tree):
    with pytest.raises(ValueError):
        reorder_f2c(hglet(strip_tree, strip21, "sym"))


def test_reorder_f2c_two_elements_is_row_reversal():
    # one split only: the two rows swap and stay internally tag-sorted
    d = ghwt(balanced_tree(2))
    assert reorder_f2c(d).keys() == d.level_keys(1) + d.level_keys(0)


def test_extract_walsh(strip_tree):
    d = ghwt(strip_tree)
    atoms = extract_walsh(d)
    assert len(atoms) == 21
    assert [a.l for a in atoms] == sorted(a.l for a in atoms)
    basis = basis_from_atoms(atoms, 21)
    mat = basis.materialize()
    assert np.abs(mat @ mat.T - np.eye(21)).max() < 1e-10


def test_extract_haar_equals_haar_basis(strip_tree):
    d = ghwt(strip_tree)
    atoms = {a.key: a.values for a in extract_haar(d)}
    reference = {a.key: a.values for a in haar_basis(strip_tree).atoms()}
    assert set(atoms) == set(reference)
    for key, values in atoms.items():
        assert np.abs(values - reference[key]).max() < 1e-12


def test_basis_roundtrip(strip_tree):
    d = ghwt(strip_tree)
    basis = d.level_basis(3)
    rng = np.random.default_rng(9)
    f = rng.standard_normal(21)
    coefs = basis.analyze(f)
    assert np.abs(basis.reconstruct(coefs) - f).max() < 1e-10


def test_level_onbs_random_complexes():
    rng = np.random.default_rng(12)
    done = 0
    while done < 3:
        c = random_closed_complex(rng)
        kappa = int(rng.integers(0, c.kappa_max + 1))
        if c.size(kappa) < 3:
            continue
        done += 1
        tree = build_tree(c, kappa)
        check_level_onbs(ghwt(tree))
        check_level_onbs(hglet(tree, c, "sym"))
