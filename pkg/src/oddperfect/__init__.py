"""Quadratic-residue criteria for odd perfect numbers.

The public surface is re-exported here; see the submodules for details:
``arith`` (symbols), ``factor`` (primality, factoring, sigma),
``euler_form``, ``criteria`` (shape filters), ``search`` and ``records``.
"""

__version__ = "0.1.0"

from .arith import jacobi, legendre, legendre_two, mod_pow, reciprocity_pair
from .criteria import (
    CRITERIA,
    FilterVerdict,
    Outcome,
    ShapeSpec,
    apply_criterion,
    euler_form_filter,
    parity_certificate,
    parse_shape,
    residue_matrix,
    support_filter,
    theorem1_filter,
    theorem2_filter,
)
from .errors import DomainError, GrammarError, IncompleteFactorization, UsageError
from .euler_form import check_euler_form, verify_lemma_numeric
from .factor import (
    Classification,
    Factorization,
    Kind,
    PrimePower,
    classify,
    divisor_count,
    factorize,
    is_prime,
    parse_factorization,
    sigma,
    sigma_prime_power,
)
from .search import enumerate_shapes, run_pipeline, scan_perfect

__all__ = [
    "CRITERIA", "Classification", "DomainError", "Factorization", "FilterVerdict", "GrammarError",
    "IncompleteFactorization", "Kind", "Outcome", "PrimePower", "ShapeSpec", "UsageError",
    "apply_criterion", "check_euler_form", "classify", "divisor_count", "enumerate_shapes", "euler_form_filter", "factorize",
    "is_prime", "jacobi", "legendre", "legendre_two", "mod_pow", "parity_certificate",
    "parse_factorization", "parse_shape", "reciprocity_pair", "residue_matrix",
    "run_pipeline", "scan_perfect", "sigma", "sigma_prime_power", "support_filter",
    "theorem1_filter", "theorem2_filter", "verify_lemma_numeric",
]
