"""Trace formulas for the eigenvalue counting function of Hermitian matrices."""

from ._hermtrace import (
    ArgumentError,
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    ParseError,
    ResourceError,
    SingularityError,
    StructureError,
    anderson_roots,
    count_i,
    count_ii,
    eigenvalues,
    factorization_residual,
    figure1,
    identities,
    load_matrix,
    primitive_orbits,
    run_cli,
    scattering_matrix,
    semicircle,
    semicircle_exact,
    spectral_det,
    walk,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "Error",
    "ParseError",
    "ResourceError",
    "SingularityError",
    "StructureError",
    "anderson_roots",
    "count_i",
    "count_ii",
    "eigenvalues",
    "factorization_residual",
    "figure1",
    "identities",
    "load_matrix",
    "primitive_orbits",
    "run_cli",
    "scattering_matrix",
    "semicircle",
    "semicircle_exact",
    "spectral_det",
    "walk",
]
