"""Exact symbolic calculator for Donaldson series of simple-type 4-manifolds.

The package models series of basic classes on partial intersection lattices,
implements the two-sector surface calculus with exact Gaussian-rational
scalars, glues series pairwise along genus-g square-zero odd surfaces, and
re-derives the universal diagonal pairing matrix from reference gluings as a
self-consistency check.  All arithmetic is exact; there is no floating point
outside of display helpers.
"""

from .constructions import (
    CatalogEntry,
    blow_up,
    build_bg,
    build_dia2,
    catalog,
    catalog_names,
    closed_form_cg,
    elliptic_surface,
    export_catalog,
)
from .exppoly import ExpPolynomial, InexactDivision
from .fit import (
    BasisCoordinates,
    basis_coordinates,
    fit_diagonal,
    predict_glued,
    zero_coordinates,
)
from .gaussian import GaussianRational
from .gluing import (
    GluedSeries,
    GluingSpec,
    SplitClass,
    coefficient_match,
    eval_glued,
    glue,
    glue_conjectural,
    glue_torus,
    rshift,
)
from .lattice import (
    HClass,
    Lattice,
    MarkedSurface,
    d_zero,
    d_zero_value,
    is_allowable,
    is_characteristic,
    pairing,
    signature,
)
from .series import (
    DonaldsonSeries,
    RelationPoly,
    SplitSeries,
    apply_relation,
    check_adjunction,
    check_involution,
    eval_insertion,
    finite_type_order,
    relation_poly,
    split_series,
    twist,
    twisted,
    unsplit_series,
)

__version__ = "0.1.0"

__all__ = [
    "BasisCoordinates",
    "CatalogEntry",
    "DonaldsonSeries",
    "ExpPolynomial",
    "GaussianRational",
    "GluedSeries",
    "GluingSpec",
    "HClass",
    "InexactDivision",
    "Lattice",
    "MarkedSurface",
    "RelationPoly",
    "SplitClass",
    "SplitSeries",
    "apply_relation",
    "basis_coordinates",
    "blow_up",
    "build_bg",
    "build_dia2",
    "catalog",
    "catalog_names",
    "check_adjunction",
    "check_involution",
    "closed_form_cg",
    "coefficient_match",
    "d_zero",
    "d_zero_value",
    "elliptic_surface",
    "eval_glued",
    "eval_insertion",
    "export_catalog",
    "finite_type_order",
    "fit_diagonal",
    "glue",
    "glue_conjectural",
    "glue_torus",
    "is_allowable",
    "is_characteristic",
    "pairing",
    "predict_glued",
    "relation_poly",
    "rshift",
    "signature",
    "split_series",
    "twist",
    "twisted",
    "unsplit_series",
    "zero_coordinates",
]
