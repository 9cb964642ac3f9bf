"""Exact finite-type invariants of real hypersurfaces defined by polynomials.

The kernel works with Hermitian polynomials in ``z`` and ``conj(z)`` over
Gaussian rationals.  On top of it sit Levi-determinant forms, curve-contact
searches, weights and the multitype, the commutator multitype with its
boundary system, a pre-radical Kohn algorithm and verification harnesses.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .algebra import INF, ExactScalar, HermitianPolynomial
from .catlin import commutator_multitype
from .curves import CurveJet, one_type_search, q_type_estimate
from .errors import CRTypeError, InconclusiveError, ParseError, PreconditionError
from .forms import bordered_hessian_det, levi_coefficients, levi_rank_at, levi_vanishing_order
from .kohn import run as kohn_run
from .parser import parse_polynomial, serialize
from .verify import lowest_stratum_scan, main_bound_check, truncation_invariance_check
from .weights import Weight, is_admissible_weight, is_distinguished, lex_compare, multitype_lower_bound

__all__ = [
    "__version__",
    "INF",
    "ExactScalar",
    "HermitianPolynomial",
    "CurveJet",
    "Weight",
    "CRTypeError",
    "InconclusiveError",
    "ParseError",
    "PreconditionError",
    "parse_polynomial",
    "serialize",
    "levi_coefficients",
    "levi_vanishing_order",
    "levi_rank_at",
    "bordered_hessian_det",
    "one_type_search",
    "q_type_estimate",
    "is_admissible_weight",
    "is_distinguished",
    "lex_compare",
    "multitype_lower_bound",
    "commutator_multitype",
    "kohn_run",
    "main_bound_check",
    "truncation_invariance_check",
    "lowest_stratum_scan",
]
