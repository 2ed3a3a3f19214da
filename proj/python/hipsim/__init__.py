"""Material-point simulator and calibration toolkit for powder-densification
constitutive models (C++ core with pybind11 bindings)."""

from ._hipsim import (
    HipSchedule,
    IntegratorOptions,
    MaterialTables,
    MccpParams,
    StressInvariants,
    SymTensor3,
    Trajectory,
    VpDerivatives,
    VpIncrement,
    density_update,
    elastic_stress,
    equivalent_stress,
    extract_yield_stress,
    integrate_hip,
    integrate_hip_mccp,
    integrate_uniaxial,
    invariants,
    simulate_sigma02,
    thermal_strain,
    vp_derivatives,
    vp_increments,
    vp_strain_rate,
    yield_value,
)

__all__ = [
    "HipSchedule",
    "IntegratorOptions",
    "MaterialTables",
    "MccpParams",
    "StressInvariants",
    "SymTensor3",
    "Trajectory",
    "VpDerivatives",
    "VpIncrement",
    "density_update",
    "elastic_stress",
    "equivalent_stress",
    "extract_yield_stress",
    "integrate_hip",
    "integrate_hip_mccp",
    "integrate_uniaxial",
    "invariants",
    "simulate_sigma02",
    "thermal_strain",
    "vp_derivatives",
    "vp_increments",
    "vp_strain_rate",
    "yield_value",
]
