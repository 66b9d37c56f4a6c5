"""Spin quantum Otto engine with counterdiabatic driving.

Thin wrapper over the C++ core. Matrices are numpy complex arrays; cycles and
sweep rows come back as plain dicts.
"""

from ._core import (
    ConfigError,
    DomainError,
    NumericError,
    OttoError,
    SingularityError,
    analytic_single_spin,
    analytic_two_spin,
    berry_cd_numeric,
    cd_cost,
    config_yaml,
    gibbs_state,
    lz_cd,
    lz_h0,
    presets,
    run_cycle,
    run_sweep,
    sweep_csv,
    xy_cd_transverse,
    xy_h0,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "NumericError",
    "OttoError",
    "SingularityError",
    "analytic_single_spin",
    "analytic_two_spin",
    "berry_cd_numeric",
    "cd_cost",
    "config_yaml",
    "gibbs_state",
    "lz_cd",
    "lz_h0",
    "presets",
    "run_cycle",
    "run_sweep",
    "sweep_csv",
    "xy_cd_transverse",
    "xy_h0",
]
