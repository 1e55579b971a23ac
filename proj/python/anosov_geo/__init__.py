"""Anosov analysis of geodesic flows on surfaces without conjugate points."""

from ._core import (
    AnosovError,
    ConfigError,
    ConjugatePointError,
    ConvergenceError,
    DomainError,
    ParseError,
    Profile,
    Solution,
    check_anosov,
    conjugate_points,
    constant_profile,
    expression_profile,
    flow_pushforward,
    gaussian_curvature,
    integrate_jacobi,
    solve_a,
    solve_b,
    stable_data,
    wronskian,
)

__all__ = [
    "AnosovError",
    "ConfigError",
    "ConjugatePointError",
    "ConvergenceError",
    "DomainError",
    "ParseError",
    "Profile",
    "Solution",
    "check_anosov",
    "conjugate_points",
    "constant_profile",
    "expression_profile",
    "flow_pushforward",
    "gaussian_curvature",
    "integrate_jacobi",
    "solve_a",
    "solve_b",
    "stable_data",
    "wronskian",
]
