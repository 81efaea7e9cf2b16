"""Boundary matrices and the four Hodge Laplacian variants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .complexes import Simplex, SimplicialComplex

VARIANTS = ("combinatorial", "sym", "wt", "rw")


@dataclass
class BoundaryMatrix:
    """Signed incidence matrix from (kappa+1)-cochains to kappa-cochains."""

    kappa: int
    matrix: sp.csr_matrix  # shape (|C_k|, |C_{k+1}|)

    @property
    def shape(self):
        return self.matrix.shape


@dataclass
class LaplacianMatrix:
    """One Hodge Laplacian variant on a kappa stratum.

    ``degree_vector`` holds the hull-degree diagonal used for normalization,
    with zero degrees (simplices without any co-face) replaced by 1 so that
    inverses are always defined.
    """

    kappa: int
    variant: str
    matrix: sp.csr_matrix
    degree_vector: np.ndarray
    raw_degrees: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass
class SignedAdjacency:
    """Off-diagonal negation of a Laplacian: S = diag(L) - L."""

    kappa: int
    variant: str
    matrix: sp.csr_matrix

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def boundary(c: SimplicialComplex, kappa: int) -> BoundaryMatrix:
    """Boundary operator mapping stratum kappa+1 to stratum kappa.

    Entry (face, simplex) is p_simplex * p_face * parity.  ``kappa`` equal to
    -1 or kappa_max yields an empty matrix of the right shape.
    """
    if not -1 <= kappa <= c.kappa_max:
        raise IndexError(f"kappa {kappa} out of range for boundary")
    rows = c.size(kappa) if kappa >= 0 else 0
    cols = c.size(kappa + 1)
    if rows == 0 or cols == 0:
        return BoundaryMatrix(kappa, sp.csr_matrix((rows, cols)))
    r, col, data = [], [], []
    for j, s in enumerate(c.stratum(kappa + 1)):
        for drop, face in enumerate(s.faces()):
            i = c.index_of(kappa, face)
            alpha = c.simplex(kappa, i)
            sign = 1 if drop % 2 == 0 else -1  # parity of removed position
            r.append(i)
            col.append(j)
            data.append(float(s.orientation * alpha.orientation * sign))
    mat = sp.csr_matrix((data, (r, col)), shape=(rows, cols))
    return BoundaryMatrix(kappa, mat)


def hull_degrees(c: SimplicialComplex, kappa: int) -> np.ndarray:
    """Raw degree of each kappa-simplex: sum of weights of its co-faces."""
    n = c.size(kappa)
    if kappa + 1 > c.kappa_max:
        return np.zeros(n)
    b = boundary(c, kappa).matrix
    return np.abs(b) @ c.weights(kappa + 1)


def _guard(d: np.ndarray) -> np.ndarray:
    out = d.copy()
    out[out == 0] = 1.0
    return out


def laplacian(c: SimplicialComplex, kappa: int, variant: str = "combinatorial") -> LaplacianMatrix:
    """Assemble a Hodge Laplacian on stratum ``kappa``.

    combinatorial: B_{k-1}^T B_{k-1} + B_k B_k^T from stored orientations.
    sym: the weighted symmetrically normalized variant, where degrees are
    derived from (kappa+1)-hull weights via D_l = diag(|B_l| D_{l+1} 1).
    wt, rw: D^{1/2} L_sym D^{1/2} and D^{-1} L_wt.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if not 0 <= kappa <= c.kappa_max:
        raise IndexError(f"kappa {kappa} out of range for laplacian")
    n = c.size(kappa)
    b_lo = boundary(c, kappa - 1).matrix
    b_hi = boundary(c, kappa).matrix
    raw_k = hull_degrees(c, kappa)
    if variant == "combinatorial":
        mat = (b_lo.T @ b_lo + b_hi @ b_hi.T).tocsr()
        return LaplacianMatrix(kappa, variant, mat, _guard(raw_k), raw_k)

    w_hull = c.weights(kappa + 1) if kappa + 1 <= c.kappa_max else np.zeros(0)
    raw_lo = np.abs(b_lo) @ raw_k if kappa > 0 else np.zeros(0)
    # zero degrees are guarded to 1 in every normalization factor, including
    # the sqrt(D_k) column scaling, so strata without co-faces keep their
    # face-sharing couplings
    inv_sqrt_k = sp.diags(1.0 / np.sqrt(_guard(raw_k)))
    sqrt_k = sp.diags(np.sqrt(_guard(raw_k)))
    lower = sp.csr_matrix((n, n))
    if kappa > 0 and b_lo.shape[0] > 0:
        frak_lo = sp.diags(1.0 / np.sqrt(_guard(raw_lo))) @ b_lo @ sqrt_k
        lower = frak_lo.T @ frak_lo
    upper = sp.csr_matrix((n, n))
    if b_hi.shape[1] > 0:
        frak_hi = inv_sqrt_k @ b_hi @ sp.diags(np.sqrt(w_hull))
        upper = frak_hi @ frak_hi.T
    l_sym = (lower + upper).tocsr()
    if variant == "sym":
        mat = l_sym
    elif variant == "wt":
        mat = (sqrt_k @ l_sym @ sqrt_k).tocsr()
    else:  # rw
        inv_k = sp.diags(1.0 / _guard(raw_k))
        wt = sqrt_k @ l_sym @ sqrt_k
        mat = (inv_k @ wt).tocsr()
    return LaplacianMatrix(kappa, variant, mat, _guard(raw_k), raw_k)


def signed_adjacency(l: LaplacianMatrix) -> SignedAdjacency:
    """Negated off-diagonal part of a Laplacian, with exact zero diagonal."""
    mat = (-l.matrix).tolil()
    mat.setdiag(0.0)
    return SignedAdjacency(l.kappa, l.variant, mat.tocsr())


def reorient(c: SimplicialComplex, kappa: int, p) -> SimplicialComplex:
    """New complex with stratum-kappa orientations multiplied elementwise by p."""
    p = np.asarray(p)
    if p.shape != (c.size(kappa),):
        raise ValueError(
            f"orientation vector length {p.shape} does not match stratum size "
            f"{c.size(kappa)}"
        )
    if not np.all(np.abs(p) == 1):
        raise ValueError("orientation flips must be +1 or -1")
    strata = []
    for k in range(c.kappa_max + 1):
        if k != kappa:
            strata.append(list(c.stratum(k)))
        else:
            strata.append(
                [
                    Simplex(s.vertices, int(s.orientation * p[i]), s.weight)
                    for i, s in enumerate(c.stratum(k))
                ]
            )
    return SimplicialComplex(strata, validate=False)
