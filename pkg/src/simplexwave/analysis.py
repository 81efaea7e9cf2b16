"""Approximation curves, smoothness profiles, and clustering scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionaries import Basis, Dictionary
from .partition import BipartitionTree


def tree_distance(tree: BipartitionTree, sigma: int, tau: int) -> int:
    """Size of the smallest tree region containing both simplices.

    Equal arguments give 1 (the singleton leaf).
    """
    a = tree.leaf_pos[sigma]
    b = tree.leaf_pos[tau]
    node = tree.root
    while not node.is_leaf:
        for cid in node.children:
            child = tree.nodes[cid]
            if child.leaf_lo <= a < child.leaf_hi and child.leaf_lo <= b < child.leaf_hi:
                node = child
                break
        else:
            break
    return node.size


@dataclass
class HoelderProfile:
    """Smoothness summary of a signal relative to the tree metric."""

    alpha: float
    c_h: float
    tree: BipartitionTree


def hoelder(tree: BipartitionTree, f, alpha: float) -> HoelderProfile:
    """Exact smoothness seminorm sup |f(s) - f(t)| / d(s, t)^alpha over pairs."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    f = np.asarray(f, dtype=float)
    n = tree.n
    best = 0.0
    for s in range(n):
        for t in range(s + 1, n):
            d = tree_distance(tree, s, t)
            ratio = abs(f[s] - f[t]) / d**alpha
            if ratio > best:
                best = ratio
    return HoelderProfile(alpha, best, tree)


@dataclass
class ErrorCurve:
    """Relative reconstruction error for every number of kept terms."""

    errors: np.ndarray  # length n + 1, errors[m] for m kept terms
    method: str

    @property
    def terms(self) -> np.ndarray:
        return np.arange(len(self.errors))


def nla_curve(basis, f, method: str = "") -> ErrorCurve:
    """Nonlinear approximation in a fixed orthonormal basis.

    Accepts a Basis or a best-basis selection.  Keeps the m largest-magnitude
    coefficients; the error at each m is the l2 norm of the dropped
    coefficient tail, relative to the signal norm.  The tail formulation
    makes the curve exactly non-increasing and exactly zero at m = n.
    """
    if not isinstance(basis, Basis):
        basis = basis.basis()
    f = np.asarray(f, dtype=float)
    fnorm = float(np.linalg.norm(f))
    coefs = basis.analyze(f)
    order = np.argsort(-np.abs(coefs), kind="stable")
    sq = coefs[order] ** 2
    tail = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
    errors = np.sqrt(np.maximum(tail, 0.0)) / (fnorm if fnorm > 0 else 1.0)
    return ErrorCurve(errors, method)


def best_m_term_errors(basis: Basis, f) -> np.ndarray:
    """Absolute best m-term approximation errors, m = 0..n."""
    f = np.asarray(f, dtype=float)
    coefs = basis.analyze(f)
    sq = np.sort(coefs**2)[::-1]
    tail = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
    return np.sqrt(np.maximum(tail, 0.0))


class _PrefixProjector:
    """Least-squares errors onto growing prefixes of a column sequence.

    Columns are orthogonalized in blocks (two re-orthogonalization passes)
    so the work is matrix-matrix dominated; columns that fall inside the
    accumulated span are dropped and produce no error entry.
    """

    def __init__(self, f: np.ndarray, drop_tol: float = 1e-10, block: int = 64):
        self.n = len(f)
        self.f = np.asarray(f, dtype=float)
        self.fnorm = float(np.linalg.norm(f))
        self.q = np.empty((self.n, self.n))
        self.rank = 0
        self.residual = self.f.copy()
        self.errors: list = []
        self.drop_tol = drop_tol
        self.block = block
        self._buffer: list = []

    def offer(self, column: np.ndarray) -> None:
        self._buffer.append(column)
        if len(self._buffer) >= self.block:
            self.flush()

    def flush(self) -> None:
        if not self._buffer:
            return
        v = np.column_stack(self._buffer)
        self._buffer.clear()
        q_old = self.q[:, : self.rank]
        for _ in range(2):
            if self.rank:
                v -= q_old @ (q_old.T @ v)
        scale = 1.0 if self.fnorm == 0 else self.fnorm
        e2 = float(self.residual @ self.residual)
        kept = []
        for i in range(v.shape[1]):
            col = v[:, i]
            for other in kept:
                col = col - other * (other @ col)
            norm = float(np.linalg.norm(col))
            if norm <= self.drop_tol:
                continue  # inside the current span: no new term
            col = col / norm
            kept.append(col)
            c = float(col @ self.residual)
            e2 = max(e2 - c * c, 0.0)
            self.errors.append(np.sqrt(e2) / scale)
        if kept:
            q_new = np.column_stack(kept)
            self.q[:, self.rank : self.rank + len(kept)] = q_new
            self.residual = self.residual - q_new @ (q_new.T @ self.residual)
            self.rank += len(kept)
            # block boundary: replace the estimate with the true residual norm
            self.errors[-1] = float(np.linalg.norm(self.residual)) / scale


def greedy_curve(d: Dictionary, f, method: str = "greedy") -> ErrorCurve:
    """Approximation error of the greedy atom selection, term by term.

    Runs the greedy pursuit (largest residual coefficient, atom removed from
    the pool, coefficient times atom subtracted) and reports, for each m,
    the least-squares error of the first m independent picks; picks that add
    nothing to the span are not counted as terms, so the curve ends at a
    full basis.  The selected atoms are generally not orthogonal.
    """
    from .selection import _flat_coefficients, _flat_layout

    f = np.asarray(f, dtype=float)
    n = d.n
    keys, layout = _flat_layout(d)
    proj = _PrefixProjector(f)
    taken = np.zeros(len(keys), dtype=bool)
    r_mp = f.copy()
    # phase one: the greedy pursuit proper, one pick per term
    for _ in range(n):
        values = _flat_coefficients(d, layout, r_mp)
        scores = np.abs(values)
        scores[taken] = -1.0
        pick = int(np.argmax(scores))
        taken[pick] = True
        j, k, l = keys[pick]
        blk = d.block(j, k)
        r_mp[blk.support] -= float(values[pick]) * blk.column(l)
        proj.offer(d.atom(j, k, l).values)
    proj.flush()
    # phase two: late pursuit picks often fall inside the span already built,
    # so fill the remaining terms by scoring against the orthogonal residual,
    # which can only select independent atoms (small blocks limit staleness)
    proj.block = 16
    while len(proj.errors) < n and not np.all(taken):
        if np.linalg.norm(proj.residual) <= 1e-15 * max(proj.fnorm, 1.0):
            proj.errors.extend(
                [proj.errors[-1] if proj.errors else 0.0]
                * (n - len(proj.errors))
            )
            break
        scores = _flat_coefficients(d, layout, proj.residual, absolute=True)
        scores[taken] = -1.0
        pick = int(np.argmax(scores))
        taken[pick] = True
        proj.offer(d.atom(*keys[pick]).values)
        if len(proj.errors) + len(proj._buffer) >= n:
            proj.flush()
    proj.flush()
    head = 1.0 if proj.fnorm > 0 else 0.0
    errors = np.concatenate([[head], proj.errors])
    if len(errors) < n + 1:  # atom pool exhausted: the error has stagnated
        errors = np.concatenate(
            [errors, np.full(n + 1 - len(errors), errors[-1])]
        )
    return ErrorCurve(errors[: n + 1], method)


def kscore(features: np.ndarray, centroids: np.ndarray) -> float:
    """Mean squared distance of each feature row to its nearest centroid."""
    features = np.asarray(features, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    if features.ndim != 2 or features.shape[0] == 0:
        raise ValueError("need a non-empty feature matrix")
    if centroids.ndim != 2 or centroids.shape[0] == 0:
        raise ValueError("need at least one centroid")
    d2 = (
        np.sum(features**2, axis=1)[:, None]
        - 2.0 * features @ centroids.T
        + np.sum(centroids**2, axis=1)[None, :]
    )
    return float(np.mean(np.maximum(d2.min(axis=1), 0.0)))


def kmeans(features: np.ndarray, d: int, seed: int = 0, max_iter: int = 300):
    """Lloyd iteration with distance-weighted seeding under a fixed seed."""
    features = np.asarray(features, dtype=float)
    n = features.shape[0]
    if d > n:
        raise ValueError(f"asked for {d} centroids from {n} points")
    rng = np.random.default_rng(seed)
    centroids = np.empty((d, features.shape[1]))
    centroids[0] = features[int(rng.integers(n))]
    closest = np.full(n, np.inf)
    for i in range(1, d):
        dist = np.sum((features - centroids[i - 1]) ** 2, axis=1)
        closest = np.minimum(closest, dist)
        total = float(closest.sum())
        if total <= 0:
            centroids[i] = features[int(rng.integers(n))]
            continue
        pick = int(rng.choice(n, p=closest / total))
        centroids[i] = features[pick]
    assign = np.full(n, -1)
    for _ in range(max_iter):
        d2 = (
            np.sum(features**2, axis=1)[:, None]
            - 2.0 * features @ centroids.T
            + np.sum(centroids**2, axis=1)[None, :]
        )
        new_assign = np.argmin(d2, axis=1)
        for c in range(d):
            mask = new_assign == c
            if np.any(mask):
                centroids[c] = features[mask].mean(axis=0)
            else:
                # re-seed an empty cluster on the point farthest from its centroid
                far = int(np.argmax(d2[np.arange(n), new_assign]))
                centroids[c] = features[far]
                new_assign[far] = c
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return centroids


def pursuit_features(d: Dictionary, signals: np.ndarray, m: int):
    """Atom keys selected by simultaneous matching pursuit on a signal set.

    Picks the atom with the largest summed squared coefficient across all
    signals, projects every signal onto the selected span, and repeats.
    """
    from .selection import _flat_coefficients, _flat_layout

    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    keys, flat = _flat_layout(d)
    if not 1 <= m <= len(keys):
        raise ValueError(f"m must be in [1, {len(keys)}], got {m}")
    taken = np.zeros(len(keys), dtype=bool)
    residual = signals.copy()
    selected = []
    columns = []
    for _ in range(m):
        energy = np.zeros(len(keys))
        for row in residual:
            energy += _flat_coefficients(d, flat, row) ** 2
        energy[taken] = -1.0
        pick = int(np.argmax(energy))
        taken[pick] = True
        selected.append(keys[pick])
        columns.append(d.atom(*keys[pick]).values)
        phi = np.column_stack(columns)
        sol, *_ = np.linalg.lstsq(phi, signals.T, rcond=None)
        residual = signals - (phi @ sol).T
    return selected


def feature_matrix(d: Dictionary, signals: np.ndarray, keys) -> np.ndarray:
    """Coefficients of each signal against a fixed list of atoms."""
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    atoms = np.column_stack([d.atom(*key).values for key in keys])
    return signals @ atoms
