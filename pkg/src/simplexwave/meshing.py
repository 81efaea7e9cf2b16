"""Triangulation and signal synthesis for planar point sets."""

from __future__ import annotations

import warnings

import numpy as np

from .complexes import SimplicialComplex, close_under_faces

ORIENT_EPS = 1e-12

# fixed bump table for the synthetic "bumps" image: (x, y, height, width)
_BUMPS = (
    (0.12, 0.22, 1.0, 0.06),
    (0.28, 0.70, 0.8, 0.05),
    (0.40, 0.35, 1.2, 0.08),
    (0.55, 0.80, 0.7, 0.04),
    (0.62, 0.15, 0.9, 0.05),
    (0.70, 0.55, 1.1, 0.09),
    (0.83, 0.30, 0.6, 0.04),
    (0.90, 0.75, 0.9, 0.06),
    (0.18, 0.50, 0.5, 0.03),
    (0.48, 0.58, 0.6, 0.05),
    (0.75, 0.90, 0.5, 0.03),
)


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def delaunay_sample(points) -> SimplicialComplex:
    """Delaunay triangulation of 2D points, closed under faces.

    Incremental insertion against a large enclosing triangle; ties in the
    empty-circle test fall back to a fixed 1e-12 tolerance, which keeps the
    result deterministic under the given input order.  Vertex ids are the
    input positions.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("need at least three 2D points")
    n = pts.shape[0]
    if not any(
        abs(_orient(*pts[0], *pts[1], *pts[i])) > ORIENT_EPS for i in range(2, n)
    ):
        raise ValueError("all points are collinear")

    span = float(max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]), 1.0))
    cx, cy = pts[:, 0].mean(), pts[:, 1].mean()
    big = 64.0 * span
    super_pts = np.array(
        [[cx - 2.0 * big, cy - big], [cx + 2.0 * big, cy - big], [cx, cy + 2.0 * big]]
    )
    coords = np.vstack([pts, super_pts])
    s0, s1, s2 = n, n + 1, n + 2

    cap = 16 * n + 16
    tri_verts = np.empty((cap, 3), dtype=int)
    circles = np.empty((cap, 3))  # center x, center y, squared radius
    alive = np.zeros(cap, dtype=bool)
    tri_verts[0] = (s0, s1, s2)
    circles[0] = _circumcircle(coords, (s0, s1, s2))
    alive[0] = True
    used = 1

    for p in range(n):
        px, py = coords[p]
        inside = (circles[:used, 0] - px) ** 2 + (
            circles[:used, 1] - py
        ) ** 2 < circles[:used, 2] + ORIENT_EPS
        bad = np.nonzero(alive[:used] & inside)[0]
        boundary: dict[tuple, int] = {}
        for t in bad:
            alive[t] = False
            a, b, c = (int(v) for v in tri_verts[t])
            for edge in ((a, b), (b, c), (a, c)):
                key = (min(edge), max(edge))
                boundary[key] = boundary.get(key, 0) + 1
        for (u, v), count in sorted(boundary.items()):
            if count != 1:
                continue  # interior edge of the carved cavity
            if used == cap:
                cap *= 2
                tri_verts = np.resize(tri_verts, (cap, 3))
                circles = np.resize(circles, (cap, 3))
                alive = np.resize(alive, cap)
            verts = tuple(sorted((u, v, p)))
            tri_verts[used] = verts
            circles[used] = _circumcircle(coords, verts)
            alive[used] = True
            used += 1

    triangles = [
        tuple(int(v) for v in tri_verts[t])
        for t in range(used)
        if alive[t] and tri_verts[t].max() < n
    ]
    if not triangles:
        raise ValueError("triangulation produced no triangles")
    return close_under_faces(triangles)


def _circumcircle(coords, verts) -> tuple:
    (ax, ay), (bx, by), (cx, cy) = coords[list(verts)]
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-300:
        return (0.0, 0.0, float("inf"))
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    r2 = (ax - ux) ** 2 + (ay - uy) ** 2
    return (ux, uy, r2)


def sample_points(count: int, seed: int) -> np.ndarray:
    """Seeded uniform points in the unit square."""
    rng = np.random.default_rng(seed)
    return rng.random((count, 2))


def bilinear_sample(grid: np.ndarray, x: float, y: float) -> float:
    """Sample a grid on [0,1]^2 at (x, y) by cell-local interpolation."""
    h, w = grid.shape
    u = x * (w - 1)
    v = y * (h - 1)
    u0 = int(np.clip(np.floor(u), 0, w - 2)) if w > 1 else 0
    v0 = int(np.clip(np.floor(v), 0, h - 2)) if h > 1 else 0
    fu = u - u0
    fv = v - v0
    if w == 1:
        fu = 0.0
    if h == 1:
        fv = 0.0
    u1 = min(u0 + 1, w - 1)
    v1 = min(v0 + 1, h - 1)
    return float(
        (1 - fu) * (1 - fv) * grid[v0, u0]
        + fu * (1 - fv) * grid[v0, u1]
        + (1 - fu) * fv * grid[v1, u0]
        + fu * fv * grid[v1, u1]
    )


def interpolate_image(c: SimplicialComplex, grid: np.ndarray, coords) -> dict:
    """Signals induced by an image: vertices sample the grid bilinearly,
    edges and triangles average the values of their vertices.

    ``coords`` holds one (x, y) in [0,1]^2 per vertex id; points outside the
    square are clamped with a warning.  Returns one value array per stratum
    up to dimension 2.
    """
    grid = np.asarray(grid, dtype=float)
    coords = np.asarray(coords, dtype=float)
    if np.any(coords < 0) or np.any(coords > 1):
        warnings.warn("coordinates outside [0,1]^2 clamped", stacklevel=2)
        coords = np.clip(coords, 0.0, 1.0)
    vertex_value = {}
    for s in c.stratum(0):
        vid = s.vertices[0]
        x, y = coords[vid]
        vertex_value[vid] = bilinear_sample(grid, x, y)
    out = {0: np.array([vertex_value[s.vertices[0]] for s in c.stratum(0)])}
    for kappa in (1, 2):
        if kappa > c.kappa_max:
            break
        out[kappa] = np.array(
            [
                float(np.mean([vertex_value[v] for v in s.vertices]))
                for s in c.stratum(kappa)
            ]
        )
    return out


def synthetic_grid(kind: str, size: int = 256) -> np.ndarray:
    """Analytic grayscale test image on [0,1]^2: ramp, bumps, or checker."""
    xs = np.linspace(0.0, 1.0, size)
    x, y = np.meshgrid(xs, xs)
    if kind == "ramp":
        return x.copy()
    if kind == "checker":
        return ((np.floor(8 * x) + np.floor(8 * y)) % 2).astype(float)
    if kind == "bumps":
        grid = np.zeros_like(x)
        for px, py, height, width in _BUMPS:
            r2 = (x - px) ** 2 + (y - py) ** 2
            grid += height * (1.0 + r2 / width**2) ** -2
        return grid / grid.max()
    raise ValueError(f"unknown synthetic image {kind!r}")


def citation_complex(records):
    """Complex plus value signals from co-authorship records.

    Each record is (author ids, citation count).  The complex is the face
    closure of the author sets.  Vertex and edge values accumulate citations
    over the records containing them; the value of a higher simplex is the
    sum of the values of its codimension-one faces, computed recursively.
    Simplex weights stay at 1 so the value signal lives alongside the
    complex rather than inside it.
    """
    records = [(tuple(sorted(set(int(a) for a in authors))), float(cites))
               for authors, cites in records]
    if not records:
        raise ValueError("need at least one record")
    for authors, cites in records:
        if not authors:
            raise ValueError("records need at least one author")
        if cites < 0:
            raise ValueError("citation counts must be non-negative")
    c = close_under_faces([authors for authors, _ in records])
    values = {0: np.zeros(c.size(0)), }
    for authors, cites in records:
        for a in authors:
            values[0][c.index_of(0, (a,))] += cites
    if c.kappa_max >= 1:
        values[1] = np.zeros(c.size(1))
        for i, e in enumerate(c.stratum(1)):
            u, v = e.vertices
            for authors, cites in records:
                if u in authors and v in authors:
                    values[1][i] += cites
    for kappa in range(2, c.kappa_max + 1):
        vals = np.zeros(c.size(kappa))
        for i, s in enumerate(c.stratum(kappa)):
            vals[i] = sum(
                values[kappa - 1][c.index_of(kappa - 1, face)] for face in s.faces()
            )
        values[kappa] = vals
    return c, values
