"""Signal-adaptive basis and atom selection from a dictionary."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dictionaries import C2F, F2C, Basis, Dictionary, ghwt_coefficients

EXACT_DP_LIMIT = 64


@dataclass
class CostSpec:
    """Additive cost functional on coefficient blocks.

    kinds: "l1" (sum of magnitudes), "lp" (sum of |c|^p for 0 < p <= 2), and
    "entropy" (sum of -x log x with x = c^2 / ||f||^2).  Additivity over
    disjoint blocks is what makes the best-basis dynamic program exact.
    """

    kind: str = "l1"
    p: float = 1.0

    @staticmethod
    def parse(text: str) -> "CostSpec":
        if text == "l1":
            return CostSpec("l1")
        if text == "entropy":
            return CostSpec("entropy")
        if text.startswith("lp:"):
            p = float(text.split(":", 1)[1])
            if not 0 < p <= 2:
                raise ValueError(f"lp exponent must be in (0, 2], got {p}")
            return CostSpec("lp", p)
        raise ValueError(f"unknown cost {text!r}")

    def atom_costs(self, coefs: np.ndarray, norm2: float) -> np.ndarray:
        c = np.abs(np.asarray(coefs, dtype=float))
        if self.kind == "l1":
            return c
        if self.kind == "lp":
            return c**self.p
        if self.kind == "entropy":
            x = c**2 / norm2 if norm2 > 0 else np.zeros_like(c)
            out = np.zeros_like(x)
            mask = x > 0
            out[mask] = -x[mask] * np.log(x[mask])
            return out
        raise ValueError(f"unknown cost kind {self.kind!r}")


@dataclass
class CoefficientTable:
    """Inner products of one signal against every atom of a dictionary."""

    dictionary: Dictionary
    coefs: dict
    signal_norm: float

    def block(self, j: int, k: int) -> np.ndarray:
        return self.coefs[(j, k)]

    def atom(self, j: int, k: int, l: int) -> float:
        blk = self.dictionary.block(j, k)
        pos = int(np.searchsorted(blk.tags, l))
        return float(self.coefs[(j, k)][pos])

    def level_vector(self, j: int) -> np.ndarray:
        keys = self.dictionary.level_keys(j)
        return np.array([self.atom(*key) for key in keys])


def analyze(d: Dictionary, f) -> CoefficientTable:
    """Expand a signal against every atom of the dictionary."""
    f = np.asarray(f, dtype=float)
    if f.shape != (d.n,):
        raise ValueError(f"signal length {f.shape} does not match stratum {d.n}")
    if d.kind == "ghwt":
        coefs = ghwt_coefficients(d, f)
    else:
        coefs = {
            key: block.vectors.T @ f[block.support]
            for key, block in d.blocks.items()
        }
    return CoefficientTable(d, coefs, float(np.linalg.norm(f)))


@dataclass
class BasisSelection:
    """A minimum-cost tiling of the dictionary: one full orthonormal basis.

    For the coarse-to-fine direction, ``blocks`` lists (level, region) pairs
    whose regions tile the stratum; fine-to-coarse blocks are (level, tag)
    groups tiling the sequency axis.  ``keys`` always lists the selected
    atoms.
    """

    direction: str
    dictionary: Dictionary
    blocks: list
    keys: list
    total_cost: float

    def basis(self) -> Basis:
        return self.dictionary.basis_from_keys(self.keys)


def best_basis(
    table: CoefficientTable, cost: CostSpec | None = None, direction: str = C2F
) -> BasisSelection:
    """Minimum-cost orthonormal basis from a dictionary by bottom-up search.

    Starts from the finest admissible tiling and replaces children by their
    parent whenever the parent block is at most as expensive.  The
    fine-to-coarse direction is available for the ghwt dictionary only.
    """
    cost = cost or CostSpec("l1")
    direction = direction.upper()
    d = table.dictionary
    if d.kind not in ("hglet", "ghwt"):
        raise ValueError("best basis needs an hglet or ghwt dictionary")
    if direction == F2C and d.kind != "ghwt":
        raise ValueError("the fine-to-coarse search is only defined for ghwt")
    if direction not in (C2F, F2C):
        raise ValueError(f"unknown direction {direction!r}")
    norm2 = table.signal_norm**2
    atom_cost = {}
    for (j, k), coefs in table.coefs.items():
        blk = d.block(j, k)
        costs = cost.atom_costs(coefs, norm2)
        for l, value in zip(blk.tags, costs):
            atom_cost[(j, k, int(l))] = float(value)
    exact = d.n <= EXACT_DP_LIMIT
    if direction == C2F:
        blocks, keys = _c2f_search(d, atom_cost, exact)
    else:
        blocks, keys = _f2c_search(d, atom_cost, exact)
    total = math.fsum(atom_cost[key] for key in sorted(keys))
    return BasisSelection(direction, d, blocks, keys, total)


def tiling_cost(atom_cost: dict, keys) -> float:
    """Canonical cost of a set of atoms (stable summation order)."""
    return math.fsum(atom_cost[key] for key in sorted(keys))


def _c2f_search(d: Dictionary, atom_cost: dict, exact: bool):
    tree = d.tree
    native = {}
    for j, level in enumerate(tree.levels):
        for k, nid in enumerate(level):
            if tree.nodes[nid].depth == j:
                native[nid] = (j, k)
    best: dict[int, tuple] = {}  # node id -> (cost, blocks, keys)
    for node in sorted(tree.nodes, key=lambda nd: -nd.depth):
        j, k = native[node.id]
        own_keys = [(j, k, int(l)) for l in d.block(j, k).tags]
        own_cost = tiling_cost(atom_cost, own_keys)
        if node.is_leaf:
            best[node.id] = (own_cost, [(j, k)], own_keys)
            continue
        ca, cb = best[node.children[0]], best[node.children[1]]
        if exact:
            child_keys = ca[2] + cb[2]
            child_cost = tiling_cost(atom_cost, child_keys)
        else:
            child_cost = ca[0] + cb[0]
        if child_cost < own_cost:
            best[node.id] = (child_cost, ca[1] + cb[1], ca[2] + cb[2])
        else:
            best[node.id] = (own_cost, [(j, k)], own_keys)
    _, blocks, keys = best[tree.root.id]
    return blocks, keys


def _f2c_search(d: Dictionary, atom_cost: dict, exact: bool):
    tree = d.tree
    members = _tag_blocks(d)
    best: dict[tuple, tuple] = {}  # (j, l) -> (cost, blocks, keys)
    for j in range(tree.j_max + 1):
        for (jj, l), keys in members.items():
            if jj != j:
                continue
            own_cost = tiling_cost(atom_cost, keys)
            if j == 0:
                best[(j, l)] = (own_cost, [(j, l)], keys)
                continue
            children = [
                best[(j - 1, t)] for t in (2 * l, 2 * l + 1) if (j - 1, t) in best
            ]
            child_keys = [key for c in children for key in c[2]]
            if len(child_keys) != len(keys):
                raise AssertionError("tag blocks must conserve atom counts")
            if exact:
                child_cost = tiling_cost(atom_cost, child_keys)
            else:
                child_cost = sum(c[0] for c in children)
            child_blocks = [blk for c in children for blk in c[1]]
            if child_cost < own_cost:
                best[(j, l)] = (child_cost, child_blocks, child_keys)
            else:
                best[(j, l)] = (own_cost, [(j, l)], keys)
    _, blocks, keys = best[(tree.j_max, 0)]
    return blocks, keys


def _tag_blocks(d: Dictionary) -> dict:
    """Atom keys grouped by (level, tag) across all regions of the level."""
    out: dict[tuple, list] = {}
    for j in range(d.tree.j_max + 1):
        for k in range(d.tree.region_count(j)):
            for l in d.block(j, k).tags:
                out.setdefault((j, int(l)), []).append((j, k, int(l)))
    return out


def enumerate_tilings(d: Dictionary, direction: str = C2F):
    """Every admissible tiling (as a list of key lists).  Small trees only.

    Used as the brute-force oracle against the dynamic program.
    """
    tree = d.tree
    if direction == C2F:
        native = {}
        for j, level in enumerate(tree.levels):
            for k, nid in enumerate(level):
                if tree.nodes[nid].depth == j:
                    native[nid] = (j, k)

        def expand(nid):
            j, k = native[nid]
            own = [[(j, k, int(l)) for l in d.block(j, k).tags]]
            node = tree.nodes[nid]
            if node.is_leaf:
                return own
            out = list(own)
            for left in expand(node.children[0]):
                for right in expand(node.children[1]):
                    out.append(left + right)
            return out

        return expand(tree.root.id)
    members = _tag_blocks(d)

    def expand_tag(j, l):
        own = [list(members[(j, l)])]
        if j == 0:
            return own
        subs = []
        for t in (2 * l, 2 * l + 1):
            if (j - 1, t) in members:
                subs.append(expand_tag(j - 1, t))
        out = list(own)
        if len(subs) == 1:
            out.extend(subs[0])
        else:
            for left in subs[0]:
                for right in subs[1]:
                    out.append(left + right)
        return out

    return expand_tag(tree.j_max, 0)


def omp(d: Dictionary, f, m: int, tol: float = 0.0):
    """Orthogonal matching pursuit over the whole dictionary.

    Repeatedly picks the atom best aligned with the residual, then
    re-projects the signal onto the span of everything selected (full least
    squares each round).  Stops after ``m`` atoms or once the residual drops
    to ``tol`` times the signal norm.  Returns (key, coefficient) pairs.
    """
    f = np.asarray(f, dtype=float)
    n = d.n
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    keys, flat = _flat_layout(d)
    fnorm = float(np.linalg.norm(f))
    selected: list = []
    columns: list = []
    coef = np.zeros(0)
    r = f.copy()
    taken = np.zeros(len(keys), dtype=bool)
    while len(selected) < m:
        scores = _flat_coefficients(d, flat, r, absolute=True)
        scores[taken] = -1.0
        pick = int(np.argmax(scores))
        taken[pick] = True
        j, k, l = keys[pick]
        selected.append((j, k, l))
        columns.append(d.atom(j, k, l).values)
        phi = np.column_stack(columns)
        coef, *_ = np.linalg.lstsq(phi, f, rcond=None)
        r = f - phi @ coef
        if np.linalg.norm(r) <= tol * fnorm:
            break
    return list(zip(selected, (float(x) for x in coef)))


def _flat_layout(d: Dictionary):
    """Stable flat enumeration of atom keys plus a fast gather recipe.

    For the ghwt kind the whole transform reduces to one plan run plus a
    single permutation gather; other kinds fall back to blockwise products.
    """
    keys = d.keys()
    if d.kind == "ghwt":
        from .dictionaries import _ghwt_plan

        plan = _ghwt_plan(d)
        level_offset = np.concatenate([[0], np.cumsum(plan.sizes)])
        tag_pos = {
            (j, k): {int(t): p for p, t in enumerate(blk.tags)}
            for (j, k), blk in d.blocks.items()
        }
        perm = np.array(
            [
                level_offset[j] + plan.offsets[(j, k)] + tag_pos[(j, k)][l]
                for (j, k, l) in keys
            ],
            dtype=int,
        )
        return keys, ("ghwt", plan, perm)
    key_index = {key: i for i, key in enumerate(keys)}
    flat = {
        (j, k): np.array(
            [key_index[(j, k, int(l))] for l in blk.tags], dtype=int
        )
        for (j, k), blk in d.blocks.items()
    }
    return keys, ("blocks", flat, len(keys))


def _flat_coefficients(d: Dictionary, layout, r, absolute=False):
    if layout[0] == "ghwt":
        _, plan, perm = layout
        out = np.concatenate(plan.run(r))[perm]
        return np.abs(out) if absolute else out
    _, flat, total = layout
    out = np.zeros(total)
    for (j, k), idx in flat.items():
        blk = d.blocks[(j, k)]
        local = blk.vectors.T @ r[blk.support]
        out[idx] = np.abs(local) if absolute else local
    return out


def greedy_select(d: Dictionary, f, m: int):
    """Greedy pursuit: repeatedly subtract the largest-coefficient atom.

    Each round recomputes every remaining coefficient against the running
    residual, removes the winning atom from the pool, and subtracts
    coefficient * atom.  The selected atoms need not be orthogonal.
    """
    f = np.asarray(f, dtype=float)
    total = d.atom_count()
    if not 0 <= m <= total:
        raise ValueError(f"m must be in [0, {total}], got {m}")
    keys, flat = _flat_layout(d)
    taken = np.zeros(len(keys), dtype=bool)
    r = f.copy()
    out = []
    for _ in range(m):
        values = _flat_coefficients(d, flat, r)
        scores = np.abs(values)
        scores[taken] = -1.0
        pick = int(np.argmax(scores))
        taken[pick] = True
        j, k, l = keys[pick]
        c = float(values[pick])
        blk = d.block(j, k)
        r[blk.support] -= c * blk.column(l)
        out.append(((j, k, l), c))
    return out
