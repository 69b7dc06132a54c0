"""Hermitian positivity on conjugation-invariant ideals and modules."""
__version__ = "0.1.0"

from .poly import HermPoly, PolySyntaxError, format_poly, leading_form, parse_poly
from .ideals import (DegenerateSpec, DiamondSpec, GWitness, WitnessSearchConfig, degenerate_generators,
                     disc_to_degenerate, g_witness_search, in_degenerate, in_diamond)
from .hereditary import (KernelBasis, MatrixTuple, TupleReport, hbi_check, hbi_matrix, hereditary_eval,
                         kernel_up_to_degree, shift_commutator, tuple_diagnostics, witness_degenerate_tuple,
                         witness_diamond_tuple)
from .certify import (CertifyOptions, GramCertificate, Refutation, Unknown, archimedean_search, certify_sos,
                      verify_certificate)
from .refute import leading_form_obstruction, radial_refute
from .spectral import FactorizationError, annulus_check, riesz_fejer
from .conics import ConicInput, ConicReport, classify_conic, classify_conic_approx

__all__ = [
    "HermPoly", "PolySyntaxError", "format_poly", "leading_form", "parse_poly",
    "DegenerateSpec", "DiamondSpec", "GWitness", "WitnessSearchConfig", "degenerate_generators",
    "disc_to_degenerate", "g_witness_search", "in_degenerate", "in_diamond",
    "KernelBasis", "MatrixTuple", "TupleReport", "hbi_check", "hbi_matrix", "hereditary_eval",
    "kernel_up_to_degree", "shift_commutator", "tuple_diagnostics", "witness_degenerate_tuple",
    "witness_diamond_tuple",
    "CertifyOptions", "GramCertificate", "Refutation", "Unknown", "archimedean_search", "certify_sos",
    "verify_certificate", "leading_form_obstruction", "radial_refute",
    "FactorizationError", "annulus_check", "riesz_fejer",
    "ConicInput", "ConicReport", "classify_conic", "classify_conic_approx",
]
