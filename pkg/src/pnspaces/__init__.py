"""Numerical toolkit for probabilistic normed spaces."""

from .distfn import CONV_TOL, DEFAULT_GRID, DistributionFunction, GridSpec, epsilon0, epsilon_inf
from .errors import ClassificationError, ConfigError, DomainError, PhiRejected
from .phi import PhiTransform, quasi_inverse, validate_phi
from .pnspace import PNSpace, Rational1, ScaledRational, SimpleFamily, Vector
from .triangle import TAU_M, TAU_MAX, TAU_PI, tau_M, tau_T, tau_Tstar

__all__ = [
    "CONV_TOL", "DEFAULT_GRID", "DistributionFunction", "GridSpec", "epsilon0", "epsilon_inf",
    "ClassificationError", "ConfigError", "DomainError", "PhiRejected",
    "PhiTransform", "quasi_inverse", "validate_phi",
    "PNSpace", "Rational1", "ScaledRational", "SimpleFamily", "Vector",
    "TAU_M", "TAU_MAX", "TAU_PI", "tau_M", "tau_T", "tau_Tstar",
]
