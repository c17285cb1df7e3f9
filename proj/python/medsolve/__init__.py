"""Minimum-error discrimination of linearly independent quantum ensembles."""

from ._medsolve import (
    Ensemble,
    MedError,
    barrier_solve,
    check_optimal,
    ensemble_distance,
    helstrom_two_state,
    map_r,
    map_r_inverse,
    pgm,
    pgm_is_optimal,
    random_ensemble,
    solve,
    success_probability,
    validate,
)

__all__ = [
    "Ensemble",
    "MedError",
    "barrier_solve",
    "check_optimal",
    "ensemble_distance",
    "helstrom_two_state",
    "map_r",
    "map_r_inverse",
    "pgm",
    "pgm_is_optimal",
    "random_ensemble",
    "solve",
    "success_probability",
    "validate",
]
