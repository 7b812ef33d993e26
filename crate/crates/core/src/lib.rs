//! Thermal Casimir interaction between a metal plate and a dielectric plate.
//!
//! The [`lifshitz`] engine evaluates the Lifshitz free energy at imaginary
//! Matsubara frequencies and derives pressure and entropy from it. The
//! [`dilute`] and [`asymptotics`] modules provide closed forms used to check
//! the engine, and [`materials`] ships ready-made permittivity models.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod constants;
pub mod dilute;
pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod numerics;
pub mod permittivity;
pub mod reflection;
pub mod validation;

pub use error::{CasimirError, Result};
pub use lifshitz::{
    entropy, evaluate, free_energy, pressure, relative_thermal_correction_f, relative_thermal_correction_p, sweep,
    PlateConfig, PointResult, SolverSettings, SweepAxis, SweepRow, SweepSpec, ThermalQuantities, ZeroTemperatureMethod,
};
pub use materials::{builtin_material, resolve_material, MaterialRecord, MaterialStore, StaticEps};
pub use numerics::QuadratureSpec;
pub use permittivity::{DrudeParams, NinhamParsegian, OpticalDataset, Permittivity, PermittivityModel};
pub use reflection::{log_kernel, reflection_coeffs, ReflectionPair};
