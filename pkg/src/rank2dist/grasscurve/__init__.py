"""Curves in the (Lagrange) Grassmannian as truncated matrix power series."""

from .canonical import (
    CanonicalFrame,
    LaurentFrame,
    StructuralResidual,
    canonical_basis_m2,
    laurent_agrees,
    sbar,
    structural_eq_check,
    w_laurent,
)
from .curves import (
    GJets,
    JumpReport,
    MatCurve,
    ReparamResidual,
    cross_ratio_trace_check,
    curve_invariants,
    det_series,
    diagonal_invariants,
    generating_jets,
    generic_weight,
    jump_asymptotics,
    jump_one_search,
    mobius,
    reparametrization_check,
    ricci_and_density,
    schwarzian,
    weight_jump_report,
    weight_rank,
)
from .jacobi import CrossCheck, cross_check_A, reduced_jacobi_series

__all__ = [
    "CanonicalFrame",
    "CrossCheck",
    "GJets",
    "JumpReport",
    "LaurentFrame",
    "MatCurve",
    "ReparamResidual",
    "StructuralResidual",
    "canonical_basis_m2",
    "cross_check_A",
    "cross_ratio_trace_check",
    "curve_invariants",
    "det_series",
    "diagonal_invariants",
    "generating_jets",
    "generic_weight",
    "jump_asymptotics",
    "jump_one_search",
    "laurent_agrees",
    "mobius",
    "reduced_jacobi_series",
    "reparametrization_check",
    "ricci_and_density",
    "sbar",
    "schwarzian",
    "structural_eq_check",
    "w_laurent",
    "weight_jump_report",
    "weight_rank",
]
