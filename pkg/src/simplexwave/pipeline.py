"""End-to-end flows shared by the CLI and the verification suite."""

from __future__ import annotations

import numpy as np

from .analysis import (
    feature_matrix,
    greedy_curve,
    kmeans,
    kscore,
    nla_curve,
    pursuit_features,
)
from .complexes import SimplicialComplex
from .dictionaries import basis_from_atoms, extract_walsh, ghwt, haar_basis, hglet
from .partition import BipartitionTree, build_tree
from .selection import CostSpec, analyze, best_basis

APPROX_METHODS = (
    "delta",
    "fourier",
    "haar",
    "walsh",
    "hglet-bb",
    "ghwt-c2f",
    "ghwt-f2c",
    "greedy",
)


def approximation_curves(
    c: SimplicialComplex,
    kappa: int,
    f: np.ndarray,
    methods=APPROX_METHODS,
    tree: BipartitionTree | None = None,
    variant: str = "sym",
):
    """Nonlinear approximation error curves for the requested methods.

    Builds the bipartition tree and whichever dictionaries the methods need,
    then expands the signal in each basis.  Best-basis methods use the l1
    cost; the greedy curve reports least-squares errors over its selection
    order.
    """
    methods = list(methods)
    unknown = [m for m in methods if m not in APPROX_METHODS]
    if unknown:
        raise ValueError(f"unknown approximation methods: {unknown}")
    tree = tree or build_tree(c, kappa)
    f = np.asarray(f, dtype=float)
    need_hglet = any(m in ("fourier", "hglet-bb") for m in methods)
    need_ghwt = any(
        m in ("delta", "walsh", "ghwt-c2f", "ghwt-f2c", "greedy") for m in methods
    )
    hglet_dict = hglet(tree, c, variant) if need_hglet else None
    ghwt_dict = ghwt(tree) if need_ghwt else None
    cost = CostSpec("l1")
    curves = []
    for method in methods:
        if method == "delta":
            basis = ghwt_dict.level_basis(tree.j_max)
            curves.append(nla_curve(basis, f, "delta"))
        elif method == "fourier":
            curves.append(nla_curve(hglet_dict.level_basis(0), f, "fourier"))
        elif method == "haar":
            curves.append(nla_curve(haar_basis(tree).basis(), f, "haar"))
        elif method == "walsh":
            basis = basis_from_atoms(extract_walsh(ghwt_dict), c.size(kappa))
            curves.append(nla_curve(basis, f, "walsh"))
        elif method == "hglet-bb":
            sel = best_basis(analyze(hglet_dict, f), cost, "C2F")
            curves.append(nla_curve(sel.basis(), f, "hglet-bb"))
        elif method == "ghwt-c2f":
            sel = best_basis(analyze(ghwt_dict, f), cost, "C2F")
            curves.append(nla_curve(sel.basis(), f, "ghwt-c2f"))
        elif method == "ghwt-f2c":
            sel = best_basis(analyze(ghwt_dict, f), cost, "F2C")
            curves.append(nla_curve(sel.basis(), f, "ghwt-f2c"))
        elif method == "greedy":
            curves.append(greedy_curve(ghwt_dict, f, "greedy"))
    return curves


def split_indices(count: int, seed: int):
    """Seeded train/test/validation split of signal rows (1/2, 1/4, 1/4)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(count)
    n_train = max(1, count // 2)
    n_test = max(1, count // 4)
    train = np.sort(order[:n_train])
    test = np.sort(order[n_train:n_train + n_test])
    val = np.sort(order[n_train + n_test:])
    if val.size == 0:
        val = test
    return train, test, val


def clustering_report(d, signals, terms_list, clusters_list, seed=0):
    """Cluster-quality table over feature and cluster counts.

    For each feature count m, selects m atoms by simultaneous pursuit on the
    training rows, learns centroids on the test-row features, and scores the
    validation-row features.  Returns (clusters, features, method, score)
    rows.
    """
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    train, test, val = split_indices(signals.shape[0], seed)
    rows = []
    for m in terms_list:
        keys = pursuit_features(d, signals[train], m)
        feats_test = feature_matrix(d, signals[test], keys)
        feats_val = feature_matrix(d, signals[val], keys)
        for n_clusters in clusters_list:
            centroids = kmeans(feats_test, n_clusters, seed)
            rows.append((n_clusters, m, d.kind, kscore(feats_val, centroids)))
    return rows
