"""Multiscale transforms for signals on simplicial complexes.

Builds Hodge-Laplacian-driven hierarchical bipartitions of a kappa stratum
and, on top of them, Haar bases, local eigenvector dictionaries (hglet), and
Haar-Walsh packet dictionaries (ghwt), with best-basis and pursuit selection
plus approximation and clustering analysis tools.
"""

from .analysis import (
    ErrorCurve,
    HoelderProfile,
    greedy_curve,
    hoelder,
    kmeans,
    kscore,
    nla_curve,
    tree_distance,
)
from .complexes import (
    AdjacencyRecord,
    Simplex,
    SimplicialComplex,
    close_under_faces,
    from_simplices,
    natural_parity,
)
from .dictionaries import (
    Atom,
    Basis,
    Dictionary,
    extract_haar,
    extract_walsh,
    ghwt,
    haar_basis,
    hglet,
    reorder_f2c,
)
from .meshing import citation_complex, delaunay_sample, interpolate_image, synthetic_grid
from .operators import (
    BoundaryMatrix,
    LaplacianMatrix,
    SignedAdjacency,
    boundary,
    laplacian,
    reorient,
    signed_adjacency,
)
from .partition import (
    BipartitionTree,
    CutReport,
    FiedlerResult,
    bipartition,
    build_tree,
    cut_report,
    fiedler,
)
from .selection import (
    BasisSelection,
    CoefficientTable,
    CostSpec,
    analyze,
    best_basis,
    greedy_select,
    omp,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyRecord",
    "Atom",
    "Basis",
    "BasisSelection",
    "BipartitionTree",
    "BoundaryMatrix",
    "CoefficientTable",
    "CostSpec",
    "CutReport",
    "Dictionary",
    "ErrorCurve",
    "FiedlerResult",
    "HoelderProfile",
    "LaplacianMatrix",
    "SignedAdjacency",
    "Simplex",
    "SimplicialComplex",
    "analyze",
    "best_basis",
    "bipartition",
    "boundary",
    "build_tree",
    "citation_complex",
    "close_under_faces",
    "cut_report",
    "delaunay_sample",
    "extract_haar",
    "extract_walsh",
    "fiedler",
    "from_simplices",
    "ghwt",
    "greedy_curve",
    "greedy_select",
    "haar_basis",
    "hglet",
    "hoelder",
    "interpolate_image",
    "kmeans",
    "kscore",
    "laplacian",
    "natural_parity",
    "nla_curve",
    "omp",
    "reorder_f2c",
    "reorient",
    "signed_adjacency",
    "synthetic_grid",
    "tree_distance",
]
