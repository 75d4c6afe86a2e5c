"""Affine Cartesian codes as batch codes with quotient-space buckets."""

from .batch import (
    QueryRecoverySet,
    full_star,
    lift_recovery,
    normalize_query,
    satisfy_diagonal_mu3,
    satisfy_query_cartesian,
    satisfy_query_reed_muller,
    satisfy_same_point,
    solve_query,
)
from .buckets import (
    BucketConfig,
    Subspace,
    bucket_id,
    bucket_image,
    build_bucket_config,
    merge_buckets,
    subspace_condition,
)
from .code import CartesianCode, EvaluationDomain, Polynomial, build_code, build_domain, encode, full_space, nu
from .errors import (
    BatchCodeError,
    ConstructionError,
    DegreeTooLarge,
    DomainError,
    FieldError,
    InsufficientDirections,
    InvalidConfiguration,
    UnsupportedParameters,
)
from .gf import GF, Matrix, field_new, rank_and_solve
from .recovery import RecoverySet, lagrange_recover, recover_query_values, recovery_set
from .validator import (
    ValidationReport,
    brute_force_qrs,
    check_equiv_theorem,
    exhaustive_validate,
    verify_qrs,
)

__version__ = "0.1.0"
