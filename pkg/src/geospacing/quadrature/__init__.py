"""Empirical harness for equal-weight quadrature errors."""

from .harness import (
    ErrorProfile,
    RateFit,
    RmsCurve,
    block_error,
    block_identity_residual,
    block_identity_terms,
    deviations,
    eta_profile,
    fit_rate,
    rms_error,
    rms_profile,
    sobol_identity_residual,
    sobol_identity_terms,
    weighted_block_estimate,
)
from .integrands import SUITE, Integrand, constant, register
from .sequences import (
    Halton,
    IIDUniform,
    PointSequence,
    ScrambledVanDerCorput,
    Shifted,
    VanDerCorput,
    radical_inverse,
    random_shift,
    replicate_seeds,
    scramble_base2,
    van_der_corput,
)

__all__ = [
    "ErrorProfile", "RateFit", "RmsCurve", "block_error", "block_identity_residual",
    "block_identity_terms", "deviations", "eta_profile", "fit_rate", "rms_error",
    "rms_profile", "sobol_identity_residual", "sobol_identity_terms",
    "weighted_block_estimate", "SUITE", "Integrand", "constant", "register", "Halton",
    "IIDUniform", "PointSequence", "ScrambledVanDerCorput", "Shifted", "VanDerCorput",
    "radical_inverse", "random_shift", "replicate_seeds", "scramble_base2",
    "van_der_corput",
]
