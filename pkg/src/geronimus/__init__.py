"""Exact single and double Geronimus transformations of moment functionals.

Everything is computed over the rationals; BigFloat values appear only in the
residual of the symmetric (Cholesky) factorization check.
"""

from .double import DoubleTransform, transform_double
from .errors import (DegenerateDenominator, DegenerateDeterminant, DomainError, GeronimusError,
                     IndexOutOfRange, MismatchAt, NotRegular, RegularityError, ZeroE)
from .factor import (build_monic_jacobi, darboux_factors_double, darboux_factors_single,
                     symmetric_cholesky_check, verify_darboux)
from .moments import custom_moments, laguerre_head, laguerre_moments
from .opcore import build_gram, monic_ops, second_kind
from .pipeline import factorize_double, factorize_single, run_double, run_single, verify_suite
from .scalars import BandedMatrix, Polynomial, as_rational, format_rational
from .single import SingleTransform, transform_single

__all__ = [
    "BandedMatrix",
    "DegenerateDenominator",
    "DegenerateDeterminant",
    "DomainError",
    "DoubleTransform",
    "GeronimusError",
    "IndexOutOfRange",
    "MismatchAt",
    "NotRegular",
    "Polynomial",
    "RegularityError",
    "SingleTransform",
    "ZeroE",
    "as_rational",
    "build_gram",
    "build_monic_jacobi",
    "custom_moments",
    "darboux_factors_double",
    "darboux_factors_single",
    "factorize_double",
    "factorize_single",
    "format_rational",
    "laguerre_head",
    "laguerre_moments",
    "monic_ops",
    "run_double",
    "run_single",
    "second_kind",
    "symmetric_cholesky_check",
    "transform_double",
    "transform_single",
    "verify_darboux",
    "verify_suite",
]
