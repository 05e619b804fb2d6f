"""Invertibility tests and structured inverses for double saddle-point matrices."""

from ._dsaddle import (
    BlockSystem,
    DataError,
    DimensionError,
    Error,
    PreconditionError,
    Tolerance,
    conditions,
    dense_inverse,
    diagnose,
    generate,
    inverse_via_factorization,
    load_block_system,
    oracle_invertible,
    save_block_system,
    schur_tilde_S,
    three_block_inverse,
    two_block_inverse,
    witness_residual,
    z22_nullity_bounds,
)

__all__ = [
    "BlockSystem",
    "DataError",
    "DimensionError",
    "Error",
    "PreconditionError",
    "Tolerance",
    "conditions",
    "dense_inverse",
    "diagnose",
    "generate",
    "inverse_via_factorization",
    "load_block_system",
    "oracle_invertible",
    "save_block_system",
    "schur_tilde_S",
    "three_block_inverse",
    "two_block_inverse",
    "witness_residual",
    "z22_nullity_bounds",
]
