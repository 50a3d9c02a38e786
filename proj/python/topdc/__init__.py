"""Photon-triplet (TOPDC) generation rates for waveguides and microrings."""

from ._core import (
    ConvergenceError,
    DispersionModel,
    DomainError,
    ParseError,
    PhysicsError,
    TopdcError,
    effective_area,
    find_phase_matched,
    mc_tau_sp_wg,
    mc_tau_st_wg,
    omega_from_wavelength,
    parse_quantity,
    rates,
    run_cli,
    scaling_exponents,
    tau_ring,
    tau_sp_wg_analytic,
    tau_sp_wg_numeric,
    tau_st_wg_analytic,
    tau_st_wg_numeric,
    vacuum_power,
    wavelength_from_omega,
)

__all__ = [
    "ConvergenceError",
    "DispersionModel",
    "DomainError",
    "ParseError",
    "PhysicsError",
    "TopdcError",
    "effective_area",
    "find_phase_matched",
    "mc_tau_sp_wg",
    "mc_tau_st_wg",
    "omega_from_wavelength",
    "parse_quantity",
    "rates",
    "run_cli",
    "scaling_exponents",
    "tau_ring",
    "tau_sp_wg_analytic",
    "tau_sp_wg_numeric",
    "tau_st_wg_analytic",
    "tau_st_wg_numeric",
    "vacuum_power",
    "wavelength_from_omega",
]
