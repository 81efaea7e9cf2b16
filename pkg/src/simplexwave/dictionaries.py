"""Multiscale dictionaries on a bipartition tree: Haar, HGLET, GHWT."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, induced_region_complex
from .operators import laplacian
from .partition import BipartitionTree, full_eigh_sorted

C2F = "C2F"
F2C = "F2C"


@dataclass
class Atom:
    """A single dictionary element, tagged by (level j, region k, tag l)."""

    j: int
    k: int
    l: int
    values: np.ndarray
    support: tuple

    @property
    def key(self):
        return (self.j, self.k, self.l)


@dataclass
class Block:
    """All atoms of one region at one level, as columns over the support."""

    j: int
    k: int
    support: np.ndarray  # ascending global indices
    tags: np.ndarray  # ascending integer tags, one per column
    vectors: np.ndarray  # (len(support), len(tags))
    eigenvalues: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.support)

    def column(self, l: int) -> np.ndarray:
        pos = int(np.searchsorted(self.tags, l))
        if pos >= len(self.tags) or self.tags[pos] != l:
            raise KeyError(f"no tag {l} in block ({self.j}, {self.k})")
        return self.vectors[:, pos]


class Basis:
    """An orthonormal set of atoms grouped by support block."""

    def __init__(self, n: int, groups):
        self.n = n
        self.groups = list(groups)  # (keys, support, vectors)
        self.keys = [key for keys, _, _ in self.groups for key in keys]

    @property
    def size(self) -> int:
        return len(self.keys)

    def analyze(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        out = np.empty(self.size)
        pos = 0
        for keys, support, vectors in self.groups:
            out[pos:pos + len(keys)] = vectors.T @ f[support]
            pos += len(keys)
        return out

    def reconstruct(self, coefs: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n)
        pos = 0
        for keys, support, vectors in self.groups:
            out[support] += vectors @ coefs[pos:pos + len(keys)]
            pos += len(keys)
        return out

    def materialize(self) -> np.ndarray:
        mat = np.zeros((self.n, self.size))
        pos = 0
        for keys, support, vectors in self.groups:
            mat[np.ix_(support, range(pos, pos + len(keys)))] = vectors
            pos += len(keys)
        return mat


class Dictionary:
    """A dictionary of atoms indexed by (j, k, l) over a bipartition tree.

    For the hglet and ghwt kinds, the atoms of each level form an orthonormal
    basis; the haar kind holds a single orthonormal basis (one scaling atom
    plus one difference atom per internal tree node).
    """

    def __init__(self, kind, tree: BipartitionTree, blocks, ordering=C2F, weights=None):
        self.kind = kind
        self.tree = tree
        self.blocks = blocks
        self.ordering = ordering
        self.weights = weights
        self.n = tree.n
        self.kappa = tree.kappa

    @property
    def j_max(self) -> int:
        return self.tree.j_max

    def block(self, j: int, k: int) -> Block:
        return self.blocks[(j, k)]

    def level_keys(self, j: int):
        keys = []
        for k in range(self.tree.region_count(j)):
            block = self.blocks.get((j, k))
            if block is not None:
                keys.extend((j, k, int(l)) for l in block.tags)
        return keys

    def keys(self):
        """All atom keys in enumeration order (levels coarse to fine for C2F,
        fine to coarse with tag-major sorting for F2C)."""
        if self.kind == "haar":
            return [
                (j, k, int(l))
                for (j, k) in sorted(self.blocks)
                for l in self.blocks[(j, k)].tags
            ]
        levels = range(self.j_max + 1)
        out = []
        if self.ordering == C2F:
            for j in levels:
                out.extend(self.level_keys(j))
        else:
            for j in reversed(levels):
                out.extend(sorted(self.level_keys(j), key=lambda t: (t[2], t[1])))
        return out

    def atom(self, j: int, k: int, l: int) -> Atom:
        block = self.blocks[(j, k)]
        values = np.zeros(self.n)
        values[block.support] = block.column(l)
        return Atom(j, k, l, values, tuple(int(i) for i in block.support))

    def atoms(self):
        for key in self.keys():
            yield self.atom(*key)

    def level_basis(self, j: int) -> Basis:
        """The orthonormal basis formed by one full level of the dictionary."""
        if self.kind == "haar":
            raise ValueError("the haar dictionary is a single basis; use basis()")
        groups = []
        for k in range(self.tree.region_count(j)):
            block = self.blocks[(j, k)]
            keys = [(j, k, int(l)) for l in block.tags]
            groups.append((keys, block.support, block.vectors))
        return Basis(self.n, groups)

    def basis(self) -> Basis:
        """All atoms as one orthonormal basis (haar kind only)."""
        if self.kind != "haar":
            raise ValueError("only the haar dictionary is a single basis")
        groups = [
            ([(j, k, int(l)) for l in blk.tags], blk.support, blk.vectors)
            for (j, k), blk in sorted(self.blocks.items())
        ]
        return Basis(self.n, groups)

    def basis_from_keys(self, keys) -> Basis:
        """Orthonormal basis from an explicit list of atom keys."""
        grouped: dict[tuple, list] = {}
        for j, k, l in keys:
            grouped.setdefault((j, k), []).append(int(l))
        groups = []
        for (j, k), tags in sorted(grouped.items()):
            block = self.blocks[(j, k)]
            cols = [int(np.searchsorted(block.tags, l)) for l in sorted(tags)]
            groups.append(
                (
                    [(j, k, l) for l in sorted(tags)],
                    block.support,
                    block.vectors[:, cols],
                )
            )
        return Basis(self.n, groups)

    def atom_count(self) -> int:
        return sum(len(b.tags) for b in self.blocks.values())

    def __repr__(self):
        return (
            f"Dictionary(kind={self.kind!r}, n={self.n}, "
            f"levels={self.j_max + 1}, ordering={self.ordering})"
        )


def _haar_pair(mass_a: float, mass_b: float) -> tuple[float, float]:
    total = mass_a + mass_b
    return (
        math.sqrt(mass_b / (mass_a * total)),
        math.sqrt(mass_a / (mass_b * total)),
    )


def haar_basis(tree: BipartitionTree, weights=None) -> Dictionary:
    """Piecewise-constant orthonormal basis adapted to the bipartition tree.

    One normalized constant atom plus, for each internal node, a mean-zero
    two-level atom that is positive on the lower-index child.  With
    ``weights`` given, sums and norms are taken in the weighted inner
    product; the default is plain counting measure.
    """
    n = tree.n
    w = None if weights is None else np.asarray(weights, dtype=float)
    if w is not None and (w.shape != (n,) or np.any(w <= 0)):
        raise ValueError("weights must be positive, one per simplex")

    def mass(members):
        return float(len(members)) if w is None else float(np.sum(w[list(members)]))

    native = _native_positions(tree)
    blocks: dict[tuple, Block] = {}
    root = tree.root
    support = np.asarray(root.members, dtype=int)
    root_cols = [np.full(n, 1.0 / math.sqrt(mass(root.members)))]
    root_tags = [0]
    for node in tree.nodes:
        if node.is_leaf:
            continue
        a = tree.nodes[node.children[0]]
        b = tree.nodes[node.children[1]]
        ca, cb = _haar_pair(mass(a.members), mass(b.members))
        sup = np.asarray(node.members, dtype=int)
        col = np.zeros(len(sup))
        col[np.searchsorted(sup, list(a.members))] = ca
        col[np.searchsorted(sup, list(b.members))] = -cb
        j, k = native[node.id]
        if node.id == root.id:
            root_cols.append(col)
            root_tags.append(1)
        else:
            blocks[(j, k)] = Block(j, k, sup, np.array([1]), col[:, None])
    blocks[(0, 0)] = Block(
        0, 0, support, np.asarray(root_tags), np.column_stack(root_cols)
    )
    return Dictionary("haar", tree, blocks, weights=w)


def _native_positions(tree: BipartitionTree) -> dict[int, tuple]:
    """Map node id to its (level, index) at the depth where it was created."""
    out = {}
    for j, level in enumerate(tree.levels):
        for k, nid in enumerate(level):
            if tree.nodes[nid].depth == j:
                out[nid] = (j, k)
    return out


def hglet(tree: BipartitionTree, c: SimplicialComplex, variant: str = "sym") -> Dictionary:
    """Hierarchical local Laplacian eigenvector dictionary.

    For every level and region, the eigenvectors of the Hodge Laplacian of
    the induced sub-complex are zero-extended to the whole stratum and tagged
    by ascending eigenvalue.  The deepest level is the standard basis.
    """
    if variant not in ("combinatorial", "sym"):
        raise ValueError("hglet needs a symmetric variant: combinatorial or sym")
    kappa = tree.kappa
    blocks: dict[tuple, Block] = {}
    cache: dict[int, tuple] = {}
    for j, level in enumerate(tree.levels):
        for k, nid in enumerate(level):
            node = tree.nodes[nid]
            if nid in cache:
                support, tags, vectors, eigvals = cache[nid]
            else:
                sub, local_of = induced_region_complex(c, kappa, node.members)
                dense = laplacian(sub, kappa, variant).dense()
                eigvals, eig = full_eigh_sorted(dense)
                perm = np.asarray(local_of, dtype=int)
                vectors = eig[perm, :]
                support = np.asarray(node.members, dtype=int)
                tags = np.arange(node.size)
                cache[nid] = (support, tags, vectors, eigvals)
            blocks[(j, k)] = Block(j, k, support, tags, vectors, eigvals)
    return Dictionary("hglet", tree, blocks)


def ghwt(tree: BipartitionTree) -> Dictionary:
    """Haar-Walsh packet dictionary built bottom-up over the tree.

    Tag 0 is the normalized constant on the region, tag 1 the mean-zero
    difference of the child constants, and higher tags come from normalized
    sums and differences of child atoms (tag doubling), passing a lone child
    atom through unchanged.  Every level is an orthonormal basis.
    """
    blocks: dict[tuple, Block] = {}
    tables: dict[int, Block] = {}
    j = tree.j_max
    for k, nid in enumerate(tree.levels[j]):
        node = tree.nodes[nid]
        block = Block(
            j, k, np.asarray(node.members, dtype=int), np.array([0]), np.ones((1, 1))
        )
        blocks[(j, k)] = block
        tables[nid] = block
    for j in range(tree.j_max - 1, -1, -1):
        new_tables: dict[int, Block] = {}
        for k, nid in enumerate(tree.levels[j]):
            node = tree.nodes[nid]
            if node.is_leaf:
                old = tables[nid]
                block = Block(j, k, old.support, old.tags, old.vectors)
            else:
                block = _combine_children(
                    tree, node, tables, j, k
                )
            blocks[(j, k)] = block
            new_tables[nid] = block
        tables = new_tables
    return Dictionary("ghwt", tree, blocks)


def _combine_children(tree, node, tables, j, k) -> Block:
    a = tables[node.children[0]]
    b = tables[node.children[1]]
    support = np.asarray(node.members, dtype=int)
    pos_a = np.searchsorted(support, a.support)
    pos_b = np.searchsorted(support, b.support)
    na, nb = a.size, b.size
    ntot = na + nb
    cols = [np.full(len(support), 1.0 / math.sqrt(ntot))]
    tags = [0]
    ca, cb = _haar_pair(float(na), float(nb))
    haar = np.zeros(len(support))
    haar[pos_a] = ca
    haar[pos_b] = -cb
    cols.append(haar)
    tags.append(1)
    tags_a = {int(t): i for i, t in enumerate(a.tags)}
    tags_b = {int(t): i for i, t in enumerate(b.tags)}
    for l in sorted(set(tags_a) | set(tags_b)):
        if l == 0:
            continue
        in_a, in_b = l in tags_a, l in tags_b
        if in_a and in_b:
            va = np.zeros(len(support))
            va[pos_a] = a.vectors[:, tags_a[l]]
            vb = np.zeros(len(support))
            vb[pos_b] = b.vectors[:, tags_b[l]]
            cols.append((va + vb) / math.sqrt(2.0))
            tags.append(2 * l)
            cols.append((va - vb) / math.sqrt(2.0))
            tags.append(2 * l + 1)
        else:
            src, idx, pos = (a, tags_a[l], pos_a) if in_a else (b, tags_b[l], pos_b)
            v = np.zeros(len(support))
            v[pos] = src.vectors[:, idx]
            cols.append(v)
            tags.append(2 * l)
    order = np.argsort(tags, kind="stable")
    return Block(
        j,
        k,
        support,
        np.asarray(tags)[order],
        np.column_stack(cols)[:, order],
    )


class _GhwtPlan:
    """Index-array form of the ghwt butterflies for vectorized transforms.

    Coefficients of one level live in a flat array; each coarser level is a
    handful of gathers and scatters, so a full transform costs a few numpy
    calls per level instead of Python work per region.
    """

    def __init__(self, d: Dictionary):
        tree = d.tree
        self.offsets = {}  # (j, k) -> start position in the level's flat array
        self.sizes = []
        for j in range(tree.j_max + 1):
            pos = 0
            for k in range(tree.region_count(j)):
                self.offsets[(j, k)] = pos
                pos += len(d.blocks[(j, k)].tags)
            self.sizes.append(pos)
        self.leaf_members = np.array(
            [tree.nodes[nid].members[0] for nid in tree.levels[-1]], dtype=int
        )
        self.steps = []
        for j in range(tree.j_max - 1, -1, -1):
            level = tree.levels[j]
            child_of = {nid: i for i, nid in enumerate(tree.levels[j + 1])}
            seg_starts = []  # reduceat boundaries over the child-level regions
            copy_dst, copy_src = [], []
            scal_dst, scal_scale = [], []
            haar_dst, haar_wa, haar_wb, haar_ka, haar_kb = [], [], [], [], []
            pair_dst0, pair_dst1, pair_a, pair_b = [], [], [], []
            pass_dst, pass_src = [], []
            for k, nid in enumerate(level):
                node = tree.nodes[nid]
                base = self.offsets[(j, k)]
                if node.is_leaf:
                    kc = child_of[nid]
                    seg_starts.append(kc)
                    src = self.offsets[(j + 1, kc)]
                    for pos in range(len(d.blocks[(j, k)].tags)):
                        copy_dst.append(base + pos)
                        copy_src.append(src + pos)
                    continue
                ida, idb = node.children
                ka, kb = child_of[ida], child_of[idb]
                seg_starts.append(ka)
                na, nb = tree.nodes[ida].size, tree.nodes[idb].size
                block = d.blocks[(j, k)]
                tag_pos = {int(t): p for p, t in enumerate(block.tags)}
                scal_dst.append(base + tag_pos[0])
                scal_scale.append(1.0 / math.sqrt(na + nb))
                wa, wb = _haar_pair(float(na), float(nb))
                haar_dst.append(base + tag_pos[1])
                haar_wa.append(wa)
                haar_wb.append(wb)
                haar_ka.append(ka)
                haar_kb.append(kb)
                blk_a = d.blocks[(j + 1, ka)]
                blk_b = d.blocks[(j + 1, kb)]
                pos_a = {int(t): p for p, t in enumerate(blk_a.tags)}
                pos_b = {int(t): p for p, t in enumerate(blk_b.tags)}
                src_a, src_b = self.offsets[(j + 1, ka)], self.offsets[(j + 1, kb)]
                for l in sorted(set(pos_a) | set(pos_b)):
                    if l == 0:
                        continue
                    if l in pos_a and l in pos_b:
                        pair_dst0.append(base + tag_pos[2 * l])
                        pair_dst1.append(base + tag_pos[2 * l + 1])
                        pair_a.append(src_a + pos_a[l])
                        pair_b.append(src_b + pos_b[l])
                    elif l in pos_a:
                        pass_dst.append(base + tag_pos[2 * l])
                        pass_src.append(src_a + pos_a[l])
                    else:
                        pass_dst.append(base + tag_pos[2 * l])
                        pass_src.append(src_b + pos_b[l])
            self.steps.append(
                {
                    "j": j,
                    "seg_starts": np.array(seg_starts, dtype=int),
                    "copy": (np.array(copy_dst, int), np.array(copy_src, int)),
                    "scal": (np.array(scal_dst, int), np.array(scal_scale)),
                    "haar": (
                        np.array(haar_dst, int),
                        np.array(haar_wa),
                        np.array(haar_wb),
                        np.array(haar_ka, int),
                        np.array(haar_kb, int),
                    ),
                    "pairs": (
                        np.array(pair_dst0, int),
                        np.array(pair_dst1, int),
                        np.array(pair_a, int),
                        np.array(pair_b, int),
                    ),
                    "pass": (np.array(pass_dst, int), np.array(pass_src, int)),
                }
            )

    def run(self, f: np.ndarray):
        """Flat coefficient arrays per level, index 0 coarsest."""
        levels = [None] * (len(self.steps) + 1)
        coef = f[self.leaf_members].astype(float)
        sums = coef.copy()  # region sums, currently at the finest level
        levels[len(self.steps)] = coef
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        for step in self.steps:
            j = step["j"]
            prev = levels[j + 1]
            out = np.empty(self.sizes[j])
            dst, src = step["copy"]
            if len(dst):
                out[dst] = prev[src]
            sdst, sscale = step["scal"]
            hdst, hwa, hwb, hka, hkb = step["haar"]
            if len(sdst):
                sa = sums[hka]
                sb = sums[hkb]
                out[sdst] = (sa + sb) * sscale
                out[hdst] = hwa * sa - hwb * sb
            p0, p1, pa, pb = step["pairs"]
            if len(p0):
                va = prev[pa]
                vb = prev[pb]
                out[p0] = (va + vb) * inv_sqrt2
                out[p1] = (va - vb) * inv_sqrt2
            qdst, qsrc = step["pass"]
            if len(qdst):
                out[qdst] = prev[qsrc]
            # seg_starts is ascending by construction, so reduceat folds the
            # child-level region sums into this level's regions directly
            sums = np.add.reduceat(sums, step["seg_starts"])
            levels[j] = out
        return levels


def _ghwt_plan(d: Dictionary) -> _GhwtPlan:
    plan = getattr(d, "_plan", None)
    if plan is None:
        plan = _GhwtPlan(d)
        d._plan = plan
    return plan


def ghwt_coefficients(d: Dictionary, f: np.ndarray) -> dict:
    """All ghwt inner products against ``f`` via bottom-up tag propagation.

    Linear in the total number of atoms, mirroring the construction rules so
    the result matches columnwise products exactly up to rounding.
    """
    if d.kind != "ghwt":
        raise ValueError("fast coefficients are defined for the ghwt dictionary")
    plan = _ghwt_plan(d)
    levels = plan.run(np.asarray(f, dtype=float))
    out = {}
    for (j, k), start in plan.offsets.items():
        stop = start + len(d.blocks[(j, k)].tags)
        out[(j, k)] = levels[j][start:stop]
    return out


def reorder_f2c(d: Dictionary) -> Dictionary:
    """The same ghwt atoms re-enumerated fine-to-coarse, sorted by tag."""
    if d.kind != "ghwt":
        raise ValueError("fine-to-coarse ordering is only defined for ghwt")
    return Dictionary(d.kind, d.tree, d.blocks, ordering=F2C)


def extract_walsh(d: Dictionary):
    """The level-0 atoms in tag order: a global Walsh-style basis."""
    if d.kind != "ghwt":
        raise ValueError("walsh extraction needs the ghwt dictionary")
    block = d.blocks[(0, 0)]
    return [d.atom(0, 0, int(l)) for l in block.tags]


def extract_haar(d: Dictionary):
    """The global scaling atom plus every tag-1 atom: the Haar basis."""
    if d.kind != "ghwt":
        raise ValueError("haar extraction needs the ghwt dictionary")
    atoms = [d.atom(0, 0, 0)]
    for (j, k), block in sorted(d.blocks.items()):
        if 1 in block.tags:
            atoms.append(d.atom(j, k, 1))
    return atoms


def basis_from_atoms(atoms, n: int) -> Basis:
    """Wrap explicit atoms (assumed orthonormal) as a Basis."""
    groups = []
    for atom in atoms:
        support = np.asarray(atom.support, dtype=int)
        groups.append(([atom.key], support, atom.values[support][:, None]))
    return Basis(n, groups)
