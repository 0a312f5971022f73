"""Explicit Burkholder function for the weighted L2 martingale-transform bound.

Evaluation of the four-variable function B(x, y, w, v) and its derivatives,
numerical certification of its defining properties (initial condition,
majorization, piece ordering/continuity, constrained concavity, the matrix
lemmas behind it), and exact finite dyadic-martingale experiments for the
weighted L2 and maximal inequalities.
"""

from bellman_verify._core import (
    Params,
    classify_region,
    constrained_max_form,
    directional_second_derivative,
    eval_B,
    eval_B_maximal,
    eval_G,
    eval_U,
    eval_b,
    exact_certificates,
    fd_check,
    known_suites,
    majorization_gap,
    phi,
    phi_derivatives,
    psi_family,
    simulate,
    tree_csv,
    verify,
    __version__,
)

__all__ = [
    "Params",
    "classify_region",
    "constrained_max_form",
    "directional_second_derivative",
    "eval_B",
    "eval_B_maximal",
    "eval_G",
    "eval_U",
    "eval_b",
    "exact_certificates",
    "fd_check",
    "known_suites",
    "majorization_gap",
    "phi",
    "phi_derivatives",
    "psi_family",
    "simulate",
    "tree_csv",
    "verify",
    "__version__",
]
