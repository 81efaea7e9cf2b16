"""Sign-corrected Fiedler vectors, signed cut objectives, bipartition trees."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from .complexes import SimplicialComplex, induced_region_complex
from .operators import LaplacianMatrix, SignedAdjacency, laplacian, signed_adjacency

DENSE_EIG_LIMIT = 1200
_TIE_TOL = 1e-12


def sign_normalize(v: np.ndarray) -> np.ndarray:
    """Flip a vector so its largest-magnitude entry is positive.

    Ties go to the lowest index.  Entries within a relative 1e-9 band of the
    maximum count as tied, so rounding noise cannot move the anchor between
    entries of structurally equal magnitude.  An all-zero vector is returned
    unchanged.
    """
    mags = np.abs(v)
    top = float(mags.max(initial=0.0))
    if top == 0.0:
        return v.copy()
    idx = int(np.argmax(mags >= top * (1.0 - 1e-9)))
    if v[idx] < 0:
        return -v
    return v.copy()


def lowest_two(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Two lowest eigenpairs of a symmetric PSD matrix.

    Dense LAPACK below DENSE_EIG_LIMIT rows, shift-invert Lanczos with a fixed
    start vector above it (falling back to dense if the iteration fails).
    Eigenvalues ascend; eigenvectors are sign normalized.
    """
    n = matrix.shape[0]
    if n < 2:
        raise ValueError("need at least a 2x2 matrix for two eigenpairs")
    dense = None
    if n <= DENSE_EIG_LIMIT:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        w, v = scipy.linalg.eigh(dense, subset_by_index=[0, 1])
    else:
        mat = matrix.tocsc() if sp.issparse(matrix) else sp.csc_matrix(matrix)
        v0 = 1.0 + 1e-3 * np.arange(n) / n
        v0 /= np.linalg.norm(v0)
        try:
            w, v = sp.linalg.eigsh(mat, k=2, sigma=-1e-3, which="LM", v0=v0)
            order = np.argsort(w)
            w, v = w[order], v[:, order]
        except Exception:
            dense = mat.toarray()
            w, v = scipy.linalg.eigh(dense, subset_by_index=[0, 1])
    return w, np.column_stack([sign_normalize(v[:, 0]), sign_normalize(v[:, 1])])


def full_eigh_sorted(dense: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full symmetric eigendecomposition with deterministic ordering.

    Eigenvalues ascend; within numerically tied groups, sign-normalized
    eigenvectors are ordered lexicographically so that the output does not
    depend on LAPACK's arbitrary choice inside degenerate eigenspaces.
    """
    w, v = np.linalg.eigh(dense)
    for col in range(v.shape[1]):
        v[:, col] = sign_normalize(v[:, col])
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    start = 0
    for stop in range(1, len(w) + 1):
        if stop == len(w) or w[stop] - w[stop - 1] > _TIE_TOL * scale:
            if stop - start > 1:
                block = sorted(
                    range(start, stop), key=lambda i: tuple(np.round(v[:, i], 12))
                )
                v[:, start:stop] = v[:, block]
                w[start:stop] = w[block]
            start = stop
    return w, v


@dataclass
class FiedlerResult:
    """Lowest two eigenvectors of the random-walk operator plus the
    sign-corrected partition vector sign(phi0) * phi1."""

    phi0: np.ndarray
    phi1: np.ndarray
    p_star: np.ndarray
    fiedler: np.ndarray
    lambda0: float
    lambda1: float


def fiedler(l_sym: LaplacianMatrix, degree=None) -> FiedlerResult:
    """Sign-corrected Fiedler vector from a symmetric Laplacian.

    Eigenpairs of the random-walk operator are recovered as (lambda,
    D^{-1/2} psi) from the symmetric variant; pass ``degree`` of all ones to
    stay with the symmetric eigenvectors themselves.
    """
    n = l_sym.shape[0]
    if n < 2:
        raise ValueError("fiedler needs a region of size >= 2")
    d = l_sym.degree_vector if degree is None else np.asarray(degree, dtype=float)
    w, v = lowest_two(l_sym.matrix)
    scale = 1.0 / np.sqrt(d)
    phi0 = v[:, 0] * scale
    phi1 = v[:, 1] * scale
    phi0 = sign_normalize(phi0 / np.linalg.norm(phi0))
    phi1 = sign_normalize(phi1 / np.linalg.norm(phi1))
    p_star = np.where(phi0 >= 0, 1.0, -1.0)
    return FiedlerResult(phi0, phi1, p_star, p_star * phi1, float(w[0]), float(w[1]))


@dataclass
class CutReport:
    """Signed cut statistics of a bipartition (A, B) of a stratum."""

    ccut: float
    ccut_plus: float
    ccut_minus: float
    cvol_plus_a: float
    cvol_minus_a: float
    cvol_plus_b: float
    cvol_minus_b: float
    kcut: float
    signed_ratio_cut: float
    signed_normalized_cut: float


def cut_report(s_wt, a_members) -> CutReport:
    """Evaluate signed cut objectives for the split (A, complement).

    The kcut combines consistent cross pairs with inconsistent internal
    pairs: 2 * ccut_plus + cvol_minus(A) + cvol_minus(B).  The normalized cut
    divides by the unsigned degree volume of each side (all couplings of its
    members, crossing ones included); a side of isolated simplices has zero
    volume and scores +inf.
    """
    mat = s_wt.matrix if isinstance(s_wt, SignedAdjacency) else s_wt
    mat = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    n = mat.shape[0]
    a = np.asarray(sorted(set(int(i) for i in a_members)), dtype=int)
    if a.size == 0 or a.size == n:
        raise ValueError("cut needs a proper non-empty subset")
    mask = np.zeros(n, dtype=bool)
    mask[a] = True
    b = np.nonzero(~mask)[0]
    sub_ab = mat[np.ix_(a, b)]
    sub_aa = mat[np.ix_(a, a)]
    sub_bb = mat[np.ix_(b, b)]
    ccut_plus = float(np.sum(np.maximum(sub_ab, 0.0)))
    ccut_minus = float(np.sum(np.maximum(-sub_ab, 0.0)))
    cvol_plus_a = float(np.sum(np.maximum(sub_aa, 0.0)))
    cvol_minus_a = float(np.sum(np.maximum(-sub_aa, 0.0)))
    cvol_plus_b = float(np.sum(np.maximum(sub_bb, 0.0)))
    cvol_minus_b = float(np.sum(np.maximum(-sub_bb, 0.0)))
    kcut = 2.0 * ccut_plus + cvol_minus_a + cvol_minus_b
    ratio = (1.0 / a.size + 1.0 / b.size) * kcut
    degree = np.abs(mat).sum(axis=1)
    vol_a = float(degree[a].sum())
    vol_b = float(degree[b].sum())
    if vol_a == 0.0 or vol_b == 0.0:
        ncut = math.inf
    else:
        ncut = (1.0 / vol_a + 1.0 / vol_b) * kcut
    return CutReport(
        ccut_plus - ccut_minus,
        ccut_plus,
        ccut_minus,
        cvol_plus_a,
        cvol_minus_a,
        cvol_plus_b,
        cvol_minus_b,
        kcut,
        ratio,
        ncut,
    )


def _region_components(c: SimplicialComplex, kappa: int, members):
    """Connected components of the weak-adjacency graph on a region.

    kappa=0 uses the stored edges as the adjacency relation.
    """
    members = list(members)
    pos = {m: i for i, m in enumerate(members)}
    parent = list(range(len(members)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    if kappa == 0:
        in_region = {c.simplex(0, m).vertices[0]: m for m in members}
        for e in c.stratum(1):
            u, v = e.vertices
            if u in in_region and v in in_region:
                union(pos[in_region[u]], pos[in_region[v]])
    else:
        by_face: dict[tuple, int] = {}
        for m in members:
            for face in c.simplex(kappa, m).faces():
                if face in by_face:
                    union(pos[m], by_face[face])
                else:
                    by_face[face] = pos[m]
    comps: dict[int, list] = {}
    for i, m in enumerate(members):
        comps.setdefault(find(i), []).append(m)
    return sorted(comps.values(), key=lambda comp: comp[0])


def bipartition(c: SimplicialComplex, kappa: int, region, variant: str = "rw"):
    """Split a region of stratum kappa into two non-empty index sets.

    Disconnected regions are split into (largest component, rest).  Connected
    regions are split by the sign of the Fiedler vector of the local
    symmetric Laplacian (converted to the random-walk operator unless
    ``variant`` is "sym"), zeros landing on the positive side.  If the
    Fiedler vector is one-sided, the most weakly connected simplex is peeled
    off.  The returned pair is ordered by smallest member except in the
    disconnected case, which keeps the largest component first.
    """
    region = sorted(set(int(i) for i in region))
    if len(region) < 2:
        raise ValueError("bipartition needs a region of size >= 2")
    comps = _region_components(c, kappa, region)
    if len(comps) > 1:
        comps.sort(key=lambda comp: (-len(comp), comp[0]))
        a = comps[0]
        b = sorted(m for comp in comps[1:] for m in comp)
        return tuple(a), tuple(b)
    sub, local_of = induced_region_complex(c, kappa, region)
    l_sym = laplacian(sub, kappa, "sym")
    degree = np.ones(len(region)) if variant == "sym" else None
    res = fiedler(l_sym, degree)
    values = np.empty(len(region))
    for i, loc in enumerate(local_of):
        values[i] = res.fiedler[loc]
    pos = [m for m, val in zip(region, values) if val >= 0]
    neg = [m for m, val in zip(region, values) if val < 0]
    if not pos or not neg:
        # one-sided vector: peel the most weakly connected simplex
        s_wt = signed_adjacency(laplacian(sub, kappa, "wt"))
        strength = np.abs(s_wt.matrix).sum(axis=1).A1
        weakest = int(np.argmin(np.round(strength, 12)))
        lone = region[local_of.index(weakest)]
        pos = [lone]
        neg = [m for m in region if m != lone]
    if min(pos) > min(neg):
        pos, neg = neg, pos
    return tuple(pos), tuple(neg)


@dataclass
class TreeNode:
    """One region in the bipartition tree (leaves are singletons)."""

    id: int
    members: tuple
    depth: int
    parent: int | None = None
    children: tuple | None = None
    leaf_lo: int = 0
    leaf_hi: int = 0

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_leaf(self) -> bool:
        return self.children is None


class BipartitionTree:
    """Hierarchical bipartition of a kappa stratum down to singletons.

    ``levels[j]`` lists the regions covering the stratum at depth j; leaves
    reached earlier persist through deeper levels, so every level is an exact
    tiling.  Region k at level j is ``levels[j][k]``, children of an internal
    region sit at consecutive positions of the next level.
    """

    def __init__(self, kappa: int, nodes, levels):
        self.kappa = kappa
        self.nodes = nodes
        self.levels = levels
        self.n = len(nodes[0].members)
        self.j_max = len(levels) - 1
        leaf_ids = levels[-1]
        self.leaf_pos = {
            nodes[nid].members[0]: pos for pos, nid in enumerate(leaf_ids)
        }
        for node in nodes:
            positions = [self.leaf_pos[m] for m in node.members]
            node.leaf_lo = min(positions)
            node.leaf_hi = max(positions) + 1
            if node.leaf_hi - node.leaf_lo != len(positions):
                raise AssertionError("tree regions must be contiguous in leaf order")

    def node(self, j: int, k: int) -> TreeNode:
        return self.nodes[self.levels[j][k]]

    def region(self, j: int, k: int) -> tuple:
        return self.node(j, k).members

    def region_count(self, j: int) -> int:
        return len(self.levels[j])

    def region_size(self, j: int, k: int) -> int:
        return self.node(j, k).size

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def internal_nodes(self):
        return [node for node in self.nodes if not node.is_leaf]

    def __repr__(self):
        return (
            f"BipartitionTree(kappa={self.kappa}, n={self.n}, j_max={self.j_max})"
        )


def build_tree(c: SimplicialComplex, kappa: int, variant: str = "rw") -> BipartitionTree:
    """Recursively bipartition stratum kappa until every region is a singleton.

    Children are indexed left to right within each level, the child holding
    the smaller global index first.  The construction is deterministic.
    """
    n = c.size(kappa)
    if n < 1:
        raise ValueError(f"stratum {kappa} is empty")
    root = TreeNode(0, tuple(range(n)), 0)
    nodes = [root]
    levels = [[0]]
    current = [root]
    while any(node.size > 1 for node in current):
        nxt = []
        for node in current:
            if node.size == 1:
                nxt.append(node)
                continue
            a, b = bipartition(c, kappa, node.members, variant)
            if min(a) > min(b):
                a, b = b, a
            child_a = TreeNode(len(nodes), tuple(a), node.depth + 1, node.id)
            nodes.append(child_a)
            child_b = TreeNode(len(nodes), tuple(b), node.depth + 1, node.id)
            nodes.append(child_b)
            node.children = (child_a.id, child_b.id)
            nxt.extend([child_a, child_b])
        levels.append([node.id for node in nxt])
        current = nxt
    return BipartitionTree(kappa, nodes, levels)
