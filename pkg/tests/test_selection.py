import math

import numpy as np
import pytest

from simplexwave import (
    CostSpec,
    analyze,
    best_basis,
    build_tree,
    close_under_faces,
    ghwt,
    greedy_select,
    haar_basis,
    hglet,
    omp,
)
from simplexwave.selection import enumerate_tilings, tiling_cost

from test_partition import path_complex


@pytest.fixture(scope="module")
def strip_dicts(strip21):
    tree = build_tree(strip21, 2)
    return strip21, tree, ghwt(tree), hglet(tree, strip21, "sym")


def test_cost_parse():
    assert CostSpec.parse("l1").kind == "l1"
    assert CostSpec.parse("lp:1.5").p == 1.5
    assert CostSpec.parse("entropy").kind == "entropy"
    with pytest.raises(ValueError):
        CostSpec.parse("lp:3")
    with pytest.raises(ValueError):
        CostSpec.parse("huber")


def test_analyze_atom_is_one_hot(strip_dicts):
    _, _, dg, _ = strip_dicts
    atom = dg.atom(2, 1, 1)
    table = analyze(dg, atom.values)
    level = table.level_vector(2)
    keys = dg.level_keys(2)
    hot = keys.index((2, 1, 1))
    assert abs(level[hot] - 1.0) < 1e-10
    level[hot] = 0.0
    assert np.abs(level).max() < 1e-10


def test_analyze_constant_signal(strip_dicts):
    _, _, dg, _ = strip_dicts
    f = np.full(21, 1.0 / math.sqrt(21))
    table = analyze(dg, f)
    level = table.level_vector(0)
    assert abs(level[0] - 1.0) < 1e-12
    assert np.abs(level[1:]).max() < 1e-12


def test_analyze_parseval_per_level(strip_dicts):
    _, tree, dg, dh = strip_dicts
    rng = np.random.default_rng(4)
    for d in (dg, dh):
        f = rng.standard_normal(21)
        table = analyze(d, f)
        for j in range(tree.j_max + 1):
            level = table.level_vector(j)
            assert abs(np.sum(level**2) - np.sum(f**2)) < 1e-10


def test_analyze_length_check(strip_dicts):
    _, _, dg, _ = strip_dicts
    with pytest.raises(ValueError):
        analyze(dg, np.ones(20))


def test_best_basis_single_atom(strip_dicts):
    _, _, dg, _ = strip_dicts
    atom = dg.atom(0, 0, 1)  # not a pass-through of any parent
    sel = best_basis(analyze(dg, atom.values), CostSpec("l1"), "C2F")
    assert (0, 0) in sel.blocks
    assert sel.total_cost == pytest.approx(1.0, abs=1e-10)


def test_best_basis_is_onb_and_tiling(strip_dicts):
    strip, tree, dg, dh = strip_dicts
    rng = np.random.default_rng(5)
    f = rng.standard_normal(21)
    for d, directions in ((dg, ("C2F", "F2C")), (dh, ("C2F",))):
        table = analyze(d, f)
        for direction in directions:
            sel = best_basis(table, CostSpec("l1"), direction)
            assert len(sel.keys) == 21
            mat = sel.basis().materialize()
            assert np.abs(mat @ mat.T - np.eye(21)).max() < 1e-10
            if direction == "C2F":
                covered = sorted(
                    m for (j, k) in sel.blocks for m in tree.region(j, k)
                )
                assert covered == list(range(21))


def test_best_basis_directions_and_kinds(strip_dicts):
    strip, tree, dg, dh = strip_dicts
    f = np.arange(21.0)
    with pytest.raises(ValueError):
        best_basis(analyze(dh, f), CostSpec("l1"), "F2C")
    with pytest.raises(ValueError):
        best_basis(analyze(dg, f), CostSpec("l1"), "sideways")
    with pytest.raises(ValueError):
        best_basis(analyze(haar_basis(tree), f))


def test_best_basis_beats_fixed_levels(strip_dicts):
    _, tree, dg, dh = strip_dicts
    rng = np.random.default_rng(6)
    cost = CostSpec("l1")
    for d in (dg, dh):
        f = rng.standard_normal(21)
        table = analyze(d, f)
        sel = best_basis(table, cost, "C2F")
        norm2 = table.signal_norm**2
        level0 = float(np.sum(cost.atom_costs(table.level_vector(0), norm2)))
        leaves = float(
            np.sum(cost.atom_costs(table.level_vector(tree.j_max), norm2))
        )
        assert sel.total_cost <= min(level0, leaves) + 1e-12 * max(1.0, level0)


def test_f2c_best_basis_beats_walsh(strip_dicts):
    # the Walsh basis is one admissible fine-to-coarse tiling, so the search
    # can never return something costlier
    _, _, dg, _ = strip_dicts
    rng = np.random.default_rng(10)
    cost = CostSpec("l1")
    for _ in range(5):
        f = rng.standard_normal(21)
        table = analyze(dg, f)
        sel = best_basis(table, cost, "F2C")
        walsh = float(
            np.sum(cost.atom_costs(table.level_vector(0), table.signal_norm**2))
        )
        assert sel.total_cost <= walsh + 1e-12 * max(1.0, walsh)


def brute_force_cost(d, table, cost, direction):
    norm2 = table.signal_norm**2
    atom_cost = {}
    for (j, k), coefs in table.coefs.items():
        for l, value in zip(d.block(j, k).tags, cost.atom_costs(coefs, norm2)):
            atom_cost[(j, k, int(l))] = float(value)
    tilings = enumerate_tilings(d, direction)
    return min(tiling_cost(atom_cost, keys) for keys in tilings), len(tilings)


@pytest.mark.parametrize("cost_text", ["l1", "lp:1.5", "entropy"])
def test_best_basis_matches_brute_force(cost_text):
    cost = CostSpec.parse(cost_text)
    rng = np.random.default_rng(7)
    cases = []
    cases.append((path_complex(12), 0))
    cases.append((close_under_faces([{1, 2, 3}, {2, 3, 4}]), 1))
    strip8 = close_under_faces(
        [{2 * i, 2 * i + 2, 2 * i + 1} for i in range(4)]
        + [{2 * i + 2, 2 * i + 3, 2 * i + 1} for i in range(4)]
    )
    cases.append((strip8, 2))
    for c, kappa in cases:
        tree = build_tree(c, kappa)
        n = c.size(kappa)
        for d, direction in (
            (ghwt(tree), "C2F"),
            (ghwt(tree), "F2C"),
            (hglet(tree, c, "sym"), "C2F"),
        ):
            f = rng.standard_normal(n)
            table = analyze(d, f)
            sel = best_basis(table, cost, direction)
            best, count = brute_force_cost(d, table, cost, direction)
            assert count >= 2
            assert sel.total_cost == best


def test_omp_recovers_single_atom(strip_dicts):
    _, _, dg, _ = strip_dicts
    atom = dg.atom(1, 0, 2)
    pairs = omp(dg, atom.values, 1)
    assert pairs[0][0] == (1, 0, 2)
    assert pairs[0][1] == pytest.approx(1.0, abs=1e-10)


def test_omp_recovers_two_orthogonal_atoms(strip_dicts):
    _, _, dg, _ = strip_dicts
    a = dg.atom(1, 0, 0)
    b = dg.atom(2, 3, 1)
    assert abs(a.values @ b.values) < 1e-12
    f = 2.0 * a.values - 0.5 * b.values
    pairs = omp(dg, f, 2)
    recon = np.zeros(21)
    for key, coef in pairs:
        recon += coef * dg.atom(*key).values
    assert np.linalg.norm(recon - f) < 1e-10


def test_omp_full_level_zero_residual(strip_dicts):
    _, _, dg, _ = strip_dicts
    rng = np.random.default_rng(8)
    f = rng.standard_normal(21)
    pairs = omp(dg, f, 21)
    recon = np.zeros(21)
    for key, coef in pairs:
        recon += coef * dg.atom(*key).values
    assert np.linalg.norm(recon - f) < 1e-8


def test_omp_tolerance_stop(strip_dicts):
    _, _, dg, _ = strip_dicts
    atom = dg.atom(0, 0, 3)
    pairs = omp(dg, atom.values, 5, tol=1e-8)
    assert len(pairs) == 1


def test_omp_bounds(strip_dicts):
    _, _, dg, _ = strip_dicts
    with pytest.raises(ValueError):
        omp(dg, np.ones(21), 0)
    with pytest.raises(ValueError):
        omp(dg, np.ones(21), 22)


def test_greedy_single_atom_matches_omp(strip_dicts):
    _, _, dg, _ = strip_dicts
    atom = dg.atom(1, 1, 1)
    greedy = greedy_select(dg, atom.values, 1)
    viaomp = omp(dg, atom.values, 1)
    assert greedy[0][0] == viaomp[0][0]
    assert greedy[0][1] == pytest.approx(viaomp[0][1], abs=1e-10)


def test_greedy_residual_nonincreasing(strip_dicts):
    _, _, dg, _ = strip_dicts
    rng = np.random.default_rng(9)
    f = rng.standard_normal(21)
    pairs = greedy_select(dg, f, 15)
    r = f.copy()
    norms = [np.linalg.norm(r)]
    for key, coef in pairs:
        r -= coef * dg.atom(*key).values
        norms.append(np.linalg.norm(r))
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_greedy_empty_selection(strip_dicts):
    _, _, dg, _ = strip_dicts
    assert greedy_select(dg, np.ones(21), 0) == []
    with pytest.raises(ValueError):
        greedy_select(dg, np.ones(21), dg.atom_count() + 1)


def test_entropy_cost_additive():
    cost = CostSpec("entropy")
    coefs = np.array([0.5, -0.25, 0.0, 1.0])
    total = cost.atom_costs(coefs, 4.0)
    split = np.concatenate(
        [cost.atom_costs(coefs[:2], 4.0), cost.atom_costs(coefs[2:], 4.0)]
    )
    assert np.abs(total - split).max() < 1e-15
