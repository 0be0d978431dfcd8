"""Multiple orthogonal polynomials for non-intersecting squared Bessel paths."""

from ._core import (
    BesqError,
    CoeffTriple,
    EdgeCurves,
    FiniteParams,
    NumericalError,
    ScaledParams,
    ValidationError,
    check_variational_mu,
    check_variational_nu,
    edge_curves,
    energy,
    field,
    field_numeric,
    limit_coeffs,
    measure_mass,
    measure_support,
    mp_density,
    mu1_density,
    mu2_density,
    nu1_cdf,
    nu1_density,
    nu2_density,
    recurrence_coeffs_finite,
    recurrence_coeffs_scaled,
    run_criterion,
    sigma,
    simulate,
    symbol_roots,
    toeplitz_spectrum,
    zeros,
)

__all__ = [name for name in dir() if not name.startswith("_")]
