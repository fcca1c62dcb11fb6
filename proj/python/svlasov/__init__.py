"""Splitting integrators for the stochastic linear Vlasov equation."""

from ._svlasov import (
    ConfigError,
    PhaseGrid,
    apply_det_step,
    apply_S1,
    apply_S2,
    apply_vshift,
    build_grid,
    check_sigma_constant,
    cosine_field,
    draw_increments,
    lp_norm,
    mass,
    min_value,
    ms_convergence,
    noise_coefficients,
    parse_config,
    run,
    run_ensemble,
    step,
    two_stream,
    validate,
)

__all__ = [
    "ConfigError",
    "PhaseGrid",
    "apply_det_step",
    "apply_S1",
    "apply_S2",
    "apply_vshift",
    "build_grid",
    "check_sigma_constant",
    "cosine_field",
    "draw_increments",
    "lp_norm",
    "mass",
    "min_value",
    "ms_convergence",
    "noise_coefficients",
    "parse_config",
    "run",
    "run_ensemble",
    "step",
    "two_stream",
    "validate",
]
