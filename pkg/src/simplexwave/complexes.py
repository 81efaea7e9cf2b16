"""Oriented simplicial complexes: simplices, parity, adjacency, face closure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

WEAK = "weak"
STRONG = "strong"
KAPPA_ADJACENT = "kappa_adjacent"


@dataclass(frozen=True)
class Simplex:
    """A single oriented simplex.

    ``vertices`` is the canonical identity: a strictly increasing tuple of
    vertex ids of length dim+1.  ``orientation`` is +1 when the simplex agrees
    with the parity induced by the sorted vertex order, -1 otherwise.
    """

    vertices: tuple
    orientation: int = 1
    weight: float = 1.0

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) == 0:
            raise ValueError("simplex needs at least one vertex")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise ValueError(f"vertices must be strictly increasing: {verts}")
        if self.orientation not in (1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {self.orientation}")
        if not self.weight > 0:
            raise ValueError(f"weight must be positive, got {self.weight}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        """Yield the dim+1 codimension-one faces (vertex tuples)."""
        for i in range(len(self.vertices)):
            yield self.vertices[:i] + self.vertices[i + 1:]


def natural_parity(sigma, alpha) -> int:
    """Sign relating a simplex to a codimension-one face.

    Returns (-1)**(pos+1) where pos is the 1-based position (in the sorted
    vertex list of ``sigma``) of the vertex missing from ``alpha``, and 0 when
    ``alpha`` is not a codimension-one face of ``sigma``.  Accepts Simplex
    objects or plain vertex tuples.
    """
    sv = sigma.vertices if isinstance(sigma, Simplex) else tuple(sigma)
    av = alpha.vertices if isinstance(alpha, Simplex) else tuple(alpha)
    if len(sv) - len(av) != 1 or not set(av) <= set(sv):
        return 0
    missing = (set(sv) - set(av)).pop()
    pos = sv.index(missing) + 1
    return -1 if pos % 2 == 0 else 1


@dataclass(frozen=True)
class AdjacencyRecord:
    """Result of classifying two weakly adjacent simplices.

    ``kind`` is "strong" when the hull (vertex-set union) is itself stored in
    the complex, and "kappa_adjacent" when it is not.  ``boundary_face`` is
    the index of the shared codimension-one face, ``hull`` the stored index of
    the hull when present.
    """

    kind: str
    boundary_face: int
    hull: int | None
    hull_vertices: tuple


class SimplicialComplex:
    """A finite oriented simplicial complex, closed under taking faces.

    Simplices are grouped by dimension into strata; within a stratum they are
    kept in lexicographic vertex order, and the list position is the global
    index used by all matrix builders.  Instances are immutable after
    construction and safe for concurrent reads.
    """

    def __init__(self, strata, validate=True):
        self._strata = [sorted(level, key=lambda s: s.vertices) for level in strata]
        while self._strata and not self._strata[-1]:
            self._strata.pop()
        if not self._strata or not self._strata[0]:
            raise ValueError("complex needs at least one vertex")
        self._index = [
            {s.vertices: i for i, s in enumerate(level)} for level in self._strata
        ]
        if validate:
            self._validate()

    def _validate(self):
        for kappa, level in enumerate(self._strata):
            if len(self._index[kappa]) != len(level):
                raise ValueError(f"duplicate simplices in stratum {kappa}")
            for s in level:
                if s.dim != kappa:
                    raise ValueError(f"simplex {s.vertices} stored in stratum {kappa}")
                if kappa == 0 and s.orientation != 1:
                    raise ValueError("0-simplices must have orientation +1")
                if kappa > 0:
                    for face in s.faces():
                        if face not in self._index[kappa - 1]:
                            raise ValueError(
                                f"complex not closed under faces: {face} missing"
                            )

    # -- basic queries ----------------------------------------------------

    @property
    def kappa_max(self) -> int:
        return len(self._strata) - 1

    @property
    def vertex_count(self) -> int:
        return len(self._strata[0])

    def size(self, kappa: int) -> int:
        """Number of simplices in stratum ``kappa`` (0 when out of range)."""
        if 0 <= kappa <= self.kappa_max:
            return len(self._strata[kappa])
        return 0

    def stratum(self, kappa: int):
        return self._strata[kappa] if 0 <= kappa <= self.kappa_max else []

    def simplex(self, kappa: int, i: int) -> Simplex:
        return self._strata[kappa][i]

    def index_of(self, kappa: int, vertices) -> int | None:
        if 0 <= kappa <= self.kappa_max:
            return self._index[kappa].get(tuple(vertices))
        return None

    def orientations(self, kappa: int):
        import numpy as np

        return np.array([s.orientation for s in self.stratum(kappa)], dtype=float)

    def weights(self, kappa: int):
        import numpy as np

        return np.array([s.weight for s in self.stratum(kappa)], dtype=float)

    def __repr__(self):
        counts = ", ".join(str(len(level)) for level in self._strata)
        return f"SimplicialComplex(sizes=[{counts}])"

    # -- adjacency ---------------------------------------------------------

    def adjacency(self, kappa: int, i: int, j: int) -> AdjacencyRecord | None:
        """Classify the relation between two simplices of the same stratum.

        Returns None when the simplices share no codimension-one face.  For
        weakly adjacent pairs the record says whether the hull (their vertex
        union) is present ("strong") or absent ("kappa_adjacent").
        """
        if not 0 < kappa <= self.kappa_max:
            raise IndexError(f"kappa {kappa} out of range for adjacency")
        if i == j:
            raise IndexError("adjacency needs two distinct simplices")
        sigma = self._strata[kappa][i]
        tau = self._strata[kappa][j]
        shared = tuple(sorted(set(sigma.vertices) & set(tau.vertices)))
        if len(shared) != kappa:
            return None
        bd = self._index[kappa - 1][shared]
        hull_vertices = tuple(sorted(set(sigma.vertices) | set(tau.vertices)))
        hull = self.index_of(kappa + 1, hull_vertices)
        kind = STRONG if hull is not None else KAPPA_ADJACENT
        return AdjacencyRecord(kind, bd, hull, hull_vertices)

    def weak_neighbors(self, kappa: int, i: int):
        """Indices of stratum-kappa simplices sharing a codimension-one face.

        For kappa=0 two vertices are considered neighbors when the edge
        joining them is stored.
        """
        if kappa == 0:
            v = self._strata[0][i].vertices[0]
            out = []
            for e in self.stratum(1):
                if v in e.vertices:
                    other = e.vertices[0] if e.vertices[1] == v else e.vertices[1]
                    out.append(self._index[0][(other,)])
            return sorted(out)
        sigma = self._strata[kappa][i]
        seen = set()
        for face in sigma.faces():
            for j, tau in enumerate(self._strata[kappa]):
                if j != i and set(face) <= set(tau.vertices):
                    seen.add(j)
        return sorted(seen)

    def cofaces(self, kappa: int, i: int):
        """Indices of (kappa+1)-simplices having simplex (kappa, i) as a face."""
        if kappa + 1 > self.kappa_max:
            return []
        verts = set(self._strata[kappa][i].vertices)
        return [
            j
            for j, s in enumerate(self._strata[kappa + 1])
            if verts <= set(s.vertices)
        ]


def close_under_faces(vertex_sets) -> SimplicialComplex:
    """Build the smallest complex containing the given vertex sets.

    Every subset of every input set is stored, deduplicated, with natural
    orientation (+1) and unit weight.  Strata are ordered lexicographically.
    """
    vertex_sets = list(vertex_sets)
    if not vertex_sets:
        raise ValueError("need at least one vertex set")
    by_dim: dict[int, set] = {}
    for vs in vertex_sets:
        verts = tuple(sorted(set(int(v) for v in vs)))
        if not verts:
            raise ValueError("vertex sets must be non-empty")
        for size in range(1, len(verts) + 1):
            for sub in itertools.combinations(verts, size):
                by_dim.setdefault(size - 1, set()).add(sub)
    strata = [
        [Simplex(v) for v in sorted(by_dim.get(k, ()))]
        for k in range(max(by_dim) + 1)
    ]
    return SimplicialComplex(strata)


def from_simplices(entries, vertex_count=None) -> SimplicialComplex:
    """Build a complex from explicit (vertices, orientation, weight) entries.

    Duplicate vertex sets are merged: weights are summed and orientations must
    agree.  Missing faces are added automatically with natural orientation and
    unit weight.  When ``vertex_count`` exceeds the observed vertices and all
    ids fall inside [0, vertex_count), the remaining ids become isolated
    vertices.
    """
    merged: dict[tuple, list] = {}
    for entry in entries:
        verts, p, w = entry
        verts = tuple(sorted(int(v) for v in verts))
        if len(set(verts)) != len(verts):
            raise ValueError(f"repeated vertex in simplex {verts}")
        if verts in merged:
            if merged[verts][0] != p:
                raise ValueError(f"conflicting orientations for {verts}")
            merged[verts][1] += w
        else:
            merged[verts] = [p, w]
    by_dim: dict[int, dict] = {}
    for verts, (p, w) in merged.items():
        by_dim.setdefault(len(verts) - 1, {})[verts] = (p, w)
    if not by_dim:
        raise ValueError("no simplices given")
    # close under faces, keeping explicit entries as given
    for dim in range(max(by_dim), 0, -1):
        for verts in list(by_dim.get(dim, ())):
            for face in itertools.combinations(verts, dim):
                by_dim.setdefault(dim - 1, {}).setdefault(face, (1, 1.0))
    if vertex_count is not None:
        observed = set(v for (v,) in by_dim.get(0, {}))
        if vertex_count > len(observed):
            if not all(0 <= v < vertex_count for v in observed):
                raise ValueError(
                    "vertex count exceeds observed vertices but ids are not "
                    "contained in [0, vertex_count)"
                )
            for v in range(vertex_count):
                by_dim[0].setdefault((v,), (1, 1.0))
        elif vertex_count < len(observed):
            raise ValueError(
                f"vertex count {vertex_count} below observed {len(observed)}"
            )
    strata = []
    for dim in range(max(by_dim) + 1):
        level = [
            Simplex(verts, p if dim > 0 else 1, w)
            for verts, (p, w) in sorted(by_dim.get(dim, {}).items())
        ]
        strata.append(level)
    return SimplicialComplex(strata)


def induced_region_complex(c: SimplicialComplex, kappa: int, members):
    """Sub-complex induced by a region of stratum ``kappa``.

    Contains the region's simplices, all their faces (recursively), and those
    (kappa+1)-simplices whose codimension-one faces all lie in the region.
    Orientations and weights are inherited.  Returns the sub-complex together
    with the positions of ``members`` in its kappa stratum.
    """
    members = sorted(members)
    member_set = set(members)
    chosen: dict[int, dict] = {kappa: {}}
    for i in members:
        s = c.simplex(kappa, i)
        chosen[kappa][s.vertices] = s
    # hulls whose kappa-faces all belong to the region
    if kappa + 1 <= c.kappa_max:
        for s in c.stratum(kappa + 1):
            face_ids = [c.index_of(kappa, f) for f in s.faces()]
            if all(f in member_set for f in face_ids):
                chosen.setdefault(kappa + 1, {})[s.vertices] = s
    # full downward closure
    for dim in range(kappa, 0, -1):
        for verts in list(chosen.get(dim, {})):
            for face in itertools.combinations(verts, dim):
                if face not in chosen.setdefault(dim - 1, {}):
                    idx = c.index_of(dim - 1, face)
                    chosen[dim - 1][face] = c.simplex(dim - 1, idx)
    strata = [
        [chosen[d][v] for v in sorted(chosen[d])]
        for d in range(max(chosen) + 1)
    ]
    sub = SimplicialComplex(strata, validate=False)
    local_of = [sub.index_of(kappa, c.simplex(kappa, i).vertices) for i in members]
    return sub, local_of
