//! Finite-temperature Lifshitz free energy, pressure and entropy for a metal
//! plate facing a dielectric plate.

use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, HBAR_C, SPEED_OF_LIGHT};
use crate::error::{CasimirError, Result};
use crate::numerics::{integrate_semiinfinite, step_for_scale, try_central_derivative, Derivative, QuadratureSpec};
use crate::permittivity::{Permittivity, PermittivityModel, DILUTE_WARN_ETA};
use crate::reflection::{log_kernel, reflection_coeffs};

/// Matsubara tail tolerance used inside differentiation stencils.
const DERIVATIVE_TAIL_TOL: f64 = 1e-16;

/// Hard ceiling on the number of Matsubara terms.
pub const MAX_MATSUBARA_TERMS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateConfig {
    /// Plate separation, m.
    pub separation: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl PlateConfig {
    pub fn new(separation: f64, temperature: f64) -> Result<Self> {
        let c = PlateConfig {
            separation,
            temperature,
        };
        c.validate()?;
        Ok(c)
    }

    /// Configuration whose dimensionless temperature is `tau`.
    pub fn from_tau(separation: f64, tau: f64) -> Result<Self> {
        let t_eff = HBAR_C / (2.0 * separation * BOLTZMANN);
        PlateConfig::new(separation, tau * t_eff / (2.0 * PI))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(CasimirError::domain(format!(
                "separation must be positive, got {}",
                self.separation
            )));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(CasimirError::domain(format!(
                "temperature must be non-negative, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    /// ξ_c = c/(2a), rad/s.
    pub fn characteristic_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.separation)
    }

    /// T_eff = ħc/(2a k_B), K.
    pub fn effective_temperature(&self) -> f64 {
        HBAR_C / (2.0 * self.separation * BOLTZMANN)
    }

    /// τ = 2πT/T_eff.
    pub fn tau(&self) -> f64 {
        2.0 * PI * self.temperature / self.effective_temperature()
    }

    fn with_temperature(&self, temperature: f64) -> Self {
        PlateConfig { temperature, ..*self }
    }

    fn with_separation(&self, separation: f64) -> Self {
        PlateConfig { separation, ..*self }
    }
}

/// ħc/(32π²a³), the natural free-energy unit, J/m².
pub fn energy_unit(separation: f64) -> f64 {
    HBAR_C / (32.0 * PI * PI * separation.powi(3))
}

/// How zero-temperature quantities are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum ZeroTemperatureMethod {
    /// The Matsubara sum replaced by its continuous frequency integral.
    FrequencyIntegral,
    /// Matsubara sums at `tau` and `2 tau`, extrapolated in τ².
    SmallTau { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub quadrature: QuadratureSpec,
    pub matsubara_tail_tol: f64,
    pub zero_temperature: ZeroTemperatureMethod,
    /// Relative quadrature tolerance inside differentiation stencils.
    pub derivative_tolerance: f64,
    /// Temperature step scale, in units of T.
    pub dt_scale: f64,
    /// Separation step scale, in units of a.
    pub da_scale: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            quadrature: QuadratureSpec::default(),
            matsubara_tail_tol: 1e-10,
            zero_temperature: ZeroTemperatureMethod::FrequencyIntegral,
            derivative_tolerance: 1e-12,
            dt_scale: 1.0,
            da_scale: 1.0,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        let bad = |m: String| Err(CasimirError::Config(m));
        if !(self.matsubara_tail_tol > 0.0 && self.matsubara_tail_tol <= 1e-3) {
            return bad(format!(
                "matsubara_tail_tol must lie in (0, 1e-3], got {}",
                self.matsubara_tail_tol
            ));
        }
        if let ZeroTemperatureMethod::SmallTau { tau } = self.zero_temperature {
            if !(tau > 0.0 && tau <= 1e-3) {
                return bad(format!("zero-temperature tau must lie in (0, 1e-3], got {tau}"));
            }
        }
        if !(self.derivative_tolerance > 1e-15 && self.derivative_tolerance <= 1e-3) {
            return bad(format!(
                "derivative_tolerance must lie in (1e-15, 1e-3], got {}",
                self.derivative_tolerance
            ));
        }
        for (name, v) in [("dt_scale", self.dt_scale), ("da_scale", self.da_scale)] {
            if !(v > 0.0 && v <= 100.0) {
                return bad(format!("{name} must lie in (0, 100], got {v}"));
            }
        }
        Ok(())
    }

    fn for_derivatives(&self) -> SolverSettings {
        let tol = self.quadrature.relative_tolerance.min(self.derivative_tolerance);
        SolverSettings {
            quadrature: self.quadrature.with_relative_tolerance(tol),
            matsubara_tail_tol: self.matsubara_tail_tol.min(DERIVATIVE_TAIL_TOL),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalQuantities {
    /// J/m².
    pub free_energy: f64,
    /// Pa; negative is attraction.
    pub pressure: f64,
    /// J/(m² K).
    pub entropy: f64,
}

/// Everything computed for one (a, T) point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub config: PlateConfig,
    pub quantities: ThermalQuantities,
    pub zero_temperature: ThermalQuantities,
    pub delta_f: f64,
    pub delta_p: f64,
    /// A derivative error estimate exceeded the confidence threshold.
    pub low_confidence: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSum {
    /// Free energy, J/m².
    pub value: f64,
    /// Highest Matsubara index included.
    pub l_max: usize,
}

fn check_pair(metal: &PermittivityModel, dielectric: &PermittivityModel) -> Result<()> {
    if matches!(dielectric, PermittivityModel::IdealMetal) {
        return Err(CasimirError::Scope(
            "the dielectric plate cannot be an ideal metal".into(),
        ));
    }
    metal.validate()?;
    dielectric.validate()?;
    if dielectric.eval_epsilon(0.0)? == Permittivity::Infinite {
        return Err(CasimirError::Scope(
            "the dielectric plate has an infinite static permittivity".into(),
        ));
    }
    Ok(())
}

/// `∫_ζ^∞ y [ln(1 − r∥ᴹr∥ᴰe^{−y}) + ln(1 − r⊥ᴹr⊥ᴰe^{−y})] dy`.
fn frequency_term(eps_m: Permittivity, eps_d: Permittivity, zeta: f64, spec: &QuadratureSpec) -> Result<f64> {
    reflection_coeffs(eps_m, zeta, zeta)?;
    reflection_coeffs(eps_d, zeta, zeta)?;
    let integrand = |u: f64| {
        let y = zeta + u;
        let rm = reflection_coeffs(eps_m, zeta, y).expect("validated permittivity and y >= zeta");
        let rd = reflection_coeffs(eps_d, zeta, y).expect("validated permittivity and y >= zeta");
        y * log_kernel(rm, rd, y)
    };
    Ok(integrate_semiinfinite(integrand, 0.0, spec)?.value)
}

/// The y-integral at dimensionless frequency ζ for plates at separation `a`.
fn term_at(
    zeta: f64,
    separation: f64,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let xi = zeta * SPEED_OF_LIGHT / (2.0 * separation);
    let em = metal.eval_epsilon(xi)?;
    let ed = dielectric.eval_epsilon(xi)?;
    frequency_term(em, ed, zeta, spec)
}

/// `Σ'_l Φ(τl)` with the l = 0 term halved; returns the sum and the last index.
fn reduced_matsubara(
    separation: f64,
    tau: f64,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
    l_max: Option<usize>,
) -> Result<(f64, usize)> {
    let term = |l: usize| term_at(tau * l as f64, separation, metal, dielectric, &s.quadrature);
    let mut sum = 0.5 * term(0)?;
    if let Some(n) = l_max {
        for l in 1..=n {
            sum += term(l)?;
        }
        return Ok((sum, n));
    }
    let l_min = (10.0 / tau + 20.0).ceil() as usize;
    let decay = (-tau).exp();
    let mut prev = sum;
    for l in 1..=MAX_MATSUBARA_TERMS {
        let t = term(l)?;
        sum += t;
        if l >= l_min {
            let q = decay.max(t / prev);
            if q < 1.0 && t.abs() * q / (1.0 - q) <= s.matsubara_tail_tol * sum.abs() {
                return Ok((sum, l));
            }
        }
        prev = t;
    }
    Err(CasimirError::ToleranceNotMet {
        context: "Matsubara summation",
        estimate: sum,
        error: f64::NAN,
    })
}

/// Free energy from the Matsubara sum. `l_max` fixes the truncation; `None`
/// chooses it from the tail tolerance. Requires T > 0.
pub fn matsubara_free_energy(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
    l_max: Option<usize>,
) -> Result<MatsubaraSum> {
    cfg.validate()?;
    if cfg.temperature == 0.0 {
        return Err(CasimirError::domain("the Matsubara sum needs T > 0"));
    }
    let tau = cfg.tau();
    let (sum, l_max) = reduced_matsubara(cfg.separation, tau, metal, dielectric, s, l_max)?;
    Ok(MatsubaraSum {
        value: energy_unit(cfg.separation) * tau * sum,
        l_max,
    })
}

/// `∫₀^∞ Φ(ζ) dζ`, the T = 0 limit of `τ Σ'_l Φ(τl)`.
fn reduced_zero_temperature(
    separation: f64,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    match s.zero_temperature {
        ZeroTemperatureMethod::FrequencyIntegral => {
            let inner = s
                .quadrature
                .with_relative_tolerance((s.quadrature.relative_tolerance * 0.1).max(1e-14));
            let failure = RefCell::new(None);
            let outer = integrate_semiinfinite(
                |zeta| match term_at(zeta, separation, metal, dielectric, &inner) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                &s.quadrature,
            )?;
            match failure.into_inner() {
                Some(e) => Err(e),
                None => Ok(outer.value),
            }
        }
        ZeroTemperatureMethod::SmallTau { tau } => {
            let (f1, _) = reduced_matsubara(separation, tau, metal, dielectric, s, None)?;
            let (f2, _) = reduced_matsubara(separation, 2.0 * tau, metal, dielectric, s, None)?;
            Ok((4.0 * tau * f1 - 2.0 * tau * f2) / 3.0)
        }
    }
}

/// Zero-temperature free energy at separation `a`, J/m².
pub fn zero_temperature_free_energy(
    separation: f64,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    PlateConfig::new(separation, 0.0)?;
    s.validate()?;
    check_pair(metal, dielectric)?;
    Ok(energy_unit(separation) * reduced_zero_temperature(separation, metal, dielectric, s)?)
}

/// Casimir free energy per unit area, J/m².
pub fn free_energy(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    cfg.validate()?;
    s.validate()?;
    check_pair(metal, dielectric)?;
    if cfg.temperature == 0.0 {
        return zero_temperature_free_energy(cfg.separation, metal, dielectric, s);
    }
    Ok(matsubara_free_energy(cfg, metal, dielectric, s, None)?.value)
}

/// −∂F/∂T with its error estimate. Zero at T = 0.
pub fn entropy_derivative(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<Derivative> {
    cfg.validate()?;
    s.validate()?;
    check_pair(metal, dielectric)?;
    if cfg.temperature == 0.0 {
        log::debug!("entropy at T = 0 is its limiting value 0");
        return Ok(Derivative {
            value: 0.0,
            error: 0.0,
            low_confidence: false,
        });
    }
    let ds = s.for_derivatives();
    let scale = s.dt_scale * cfg.temperature;
    let lowest = cfg.with_temperature(cfg.temperature - 4.0 * step_for_scale(scale));
    let l_max = matsubara_free_energy(&lowest, metal, dielectric, &ds, None)?.l_max;
    let d = try_central_derivative(
        |t| Ok(matsubara_free_energy(&cfg.with_temperature(t), metal, dielectric, &ds, Some(l_max))?.value),
        cfg.temperature,
        scale,
    )?;
    Ok(Derivative { value: -d.value, ..d })
}

pub fn entropy(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    let d = entropy_derivative(cfg, metal, dielectric, s)?;
    if d.low_confidence {
        log::warn!(
            "entropy derivative at {cfg:?} has relative error {:e}",
            d.error / d.value.abs()
        );
    }
    Ok(d.value)
}

/// −∂F/∂a at fixed T with its error estimate.
pub fn pressure_derivative(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<Derivative> {
    cfg.validate()?;
    s.validate()?;
    check_pair(metal, dielectric)?;
    let ds = s.for_derivatives();
    let a = cfg.separation;
    let scale = s.da_scale * a;
    if cfg.temperature == 0.0 {
        if metal.is_frequency_independent() && dielectric.is_frequency_independent() {
            let f0 = energy_unit(a) * reduced_zero_temperature(a, metal, dielectric, &ds)?;
            return Ok(Derivative {
                value: 3.0 * f0 / a,
                error: 3.0 * f0.abs() / a * ds.quadrature.relative_tolerance,
                low_confidence: false,
            });
        }
        let d = try_central_derivative(
            |x| Ok(energy_unit(x) * reduced_zero_temperature(x, metal, dielectric, &ds)?),
            a,
            scale,
        )?;
        return Ok(Derivative { value: -d.value, ..d });
    }
    let lowest = cfg.with_separation(a - 4.0 * step_for_scale(scale));
    let l_max = matsubara_free_energy(&lowest, metal, dielectric, &ds, None)?.l_max;
    let d = try_central_derivative(
        |x| Ok(matsubara_free_energy(&cfg.with_separation(x), metal, dielectric, &ds, Some(l_max))?.value),
        a,
        scale,
    )?;
    Ok(Derivative { value: -d.value, ..d })
}

pub fn pressure(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    let d = pressure_derivative(cfg, metal, dielectric, s)?;
    if d.low_confidence {
        log::warn!(
            "pressure derivative at {cfg:?} has relative error {:e}",
            d.error / d.value.abs()
        );
    }
    Ok(d.value)
}

/// (F(a,T) − F(a,0)) / F(a,0).
pub fn relative_thermal_correction_f(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    if cfg.temperature == 0.0 {
        cfg.validate()?;
        return Ok(0.0);
    }
    let f = free_energy(cfg, metal, dielectric, s)?;
    let f0 = zero_temperature_free_energy(cfg.separation, metal, dielectric, s)?;
    Ok(relative_change(f, f0))
}

/// (P(a,T) − P(a,0)) / P(a,0).
pub fn relative_thermal_correction_p(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<f64> {
    if cfg.temperature == 0.0 {
        cfg.validate()?;
        return Ok(0.0);
    }
    let p = pressure(cfg, metal, dielectric, s)?;
    let p0 = pressure(&cfg.with_temperature(0.0), metal, dielectric, s)?;
    Ok(relative_change(p, p0))
}

/// A vanishing interaction has no thermal correction.
fn relative_change(x: f64, x0: f64) -> f64 {
    if x == 0.0 && x0 == 0.0 {
        0.0
    } else {
        (x - x0) / x0
    }
}

fn model_warnings(metal: &PermittivityModel, dielectric: &PermittivityModel) -> Vec<String> {
    let mut w = Vec::new();
    for m in [metal, dielectric] {
        if let PermittivityModel::Dilute(eta) = m {
            if *eta > DILUTE_WARN_ETA {
                w.push(format!("dilute parameter {eta} exceeds {DILUTE_WARN_ETA}"));
            }
        }
    }
    w
}

/// Free energy, pressure, entropy and both relative thermal corrections.
pub fn evaluate(
    cfg: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<PointResult> {
    let f = free_energy(cfg, metal, dielectric, s)?;
    let f0 = if cfg.temperature == 0.0 {
        f
    } else {
        zero_temperature_free_energy(cfg.separation, metal, dielectric, s)?
    };
    let sd = entropy_derivative(cfg, metal, dielectric, s)?;
    let pd = pressure_derivative(cfg, metal, dielectric, s)?;
    let p0d = if cfg.temperature == 0.0 {
        pd
    } else {
        pressure_derivative(&cfg.with_temperature(0.0), metal, dielectric, s)?
    };
    let mut warnings = model_warnings(metal, dielectric);
    for (name, d) in [("entropy", sd), ("pressure", pd), ("zero-temperature pressure", p0d)] {
        if d.low_confidence {
            warnings.push(format!(
                "{name} derivative error {:.2e} exceeds the confidence threshold",
                d.error
            ));
        }
    }
    Ok(PointResult {
        config: *cfg,
        quantities: ThermalQuantities {
            free_energy: f,
            pressure: pd.value,
            entropy: sd.value,
        },
        zero_temperature: ThermalQuantities {
            free_energy: f0,
            pressure: p0d.value,
            entropy: 0.0,
        },
        delta_f: if cfg.temperature == 0.0 {
            0.0
        } else {
            relative_change(f, f0)
        },
        delta_p: if cfg.temperature == 0.0 {
            0.0
        } else {
            relative_change(pd.value, p0d.value)
        },
        low_confidence: sd.low_confidence || pd.low_confidence || p0d.low_confidence,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Temperature,
    Separation,
}

/// Evenly spaced points from `start` to `stop` inclusive along one axis;
/// the other coordinate comes from the template configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(CasimirError::Config(format!(
                "a sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        let ok = match self.axis {
            SweepAxis::Temperature => self.start >= 0.0 && self.stop >= 0.0,
            SweepAxis::Separation => self.start > 0.0 && self.stop > 0.0,
        };
        if !ok || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CasimirError::Config(format!(
                "sweep range [{}, {}] is not valid for {:?}",
                self.start, self.stop, self.axis
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub result: Result<PointResult>,
}

/// Evaluates every sweep point in parallel. Failures are kept per row.
pub fn sweep(
    spec: &SweepSpec,
    template: &PlateConfig,
    metal: &PermittivityModel,
    dielectric: &PermittivityModel,
    s: &SolverSettings,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    s.validate()?;
    check_pair(metal, dielectric)?;
    Ok(spec
        .values()
        .into_par_iter()
        .map(|v| {
            let cfg = match spec.axis {
                SweepAxis::Temperature => template.with_temperature(v),
                SweepAxis::Separation => template.with_separation(v),
            };
            SweepRow {
                axis_value: v,
                result: evaluate(&cfg, metal, dielectric, s),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dilute(eta: f64) -> PermittivityModel {
        PermittivityModel::Dilute(eta)
    }

    #[test]
    fn effective_temperature_at_one_micron() {
        let c = PlateConfig::new(1e-6, 300.0).unwrap();
        assert_relative_eq!(c.effective_temperature(), 1145.0, max_relative = 1e-3);
        assert_relative_eq!(
            c.tau(),
            2.0 * PI * 300.0 / c.effective_temperature(),
            max_relative = 1e-15
        );
        let back = PlateConfig::from_tau(1e-6, c.tau()).unwrap();
        assert_relative_eq!(back.temperature, 300.0, max_relative = 1e-14);
    }

    #[test]
    fn vacuum_gap_gives_zero() {
        let vac = PermittivityModel::Constant(1.0);
        let s = SolverSettings::default();
        for (a, t) in [(1e-6, 300.0), (2e-7, 0.0), (5e-7, 50.0)] {
            let cfg = PlateConfig::new(a, t).unwrap();
            assert_eq!(
                free_energy(&cfg, &PermittivityModel::IdealMetal, &vac, &s).unwrap(),
                0.0
            );
            assert_eq!(pressure(&cfg, &PermittivityModel::IdealMetal, &vac, &s).unwrap(), 0.0);
            let r = evaluate(&cfg, &PermittivityModel::IdealMetal, &vac, &s).unwrap();
            assert_eq!((r.quantities.entropy, r.delta_f, r.delta_p), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn scope_errors() {
        let s = SolverSettings::default();
        let cfg = PlateConfig::new(1e-6, 300.0).unwrap();
        let m = PermittivityModel::IdealMetal;
        assert!(matches!(free_energy(&cfg, &m, &m, &s), Err(CasimirError::Scope(_))));
        let drude = PermittivityModel::Drude(crate::permittivity::DrudeParams::GOLD);
        assert!(matches!(free_energy(&cfg, &m, &drude, &s), Err(CasimirError::Scope(_))));
    }

    #[test]
    fn zero_temperature_methods_agree() {
        let a = 1e-6;
        let m = PermittivityModel::IdealMetal;
        let d = PermittivityModel::Constant(5.0);
        let s = SolverSettings::default();
        let integral = zero_temperature_free_energy(a, &m, &d, &s).unwrap();
        let small = SolverSettings {
            zero_temperature: ZeroTemperatureMethod::SmallTau { tau: 1e-3 },
            ..s
        };
        let extrapolated = zero_temperature_free_energy(a, &m, &d, &small).unwrap();
        assert_relative_eq!(integral, extrapolated, max_relative = 1e-7);
        assert!(integral < 0.0);
    }

    #[test]
    fn ideal_metal_pair_limit() {
        // As ε → ∞ the zero-temperature energy tends to −π²ħc/(720a³); the
        // finite-ε shortfall falls off roughly like ln ε/√ε.
        let a = 1e-6;
        let s = SolverSettings::default();
        let f = zero_temperature_free_energy(
            a,
            &PermittivityModel::IdealMetal,
            &PermittivityModel::Constant(1e12),
            &s,
        )
        .unwrap();
        let ideal = -PI * PI * HBAR_C / (720.0 * a.powi(3));
        assert_relative_eq!(f, ideal, max_relative = 3e-5);
    }

    #[test]
    fn dilute_first_order_zero_temperature() {
        // F0 → −(ħc/32π²a³) η (1 − 457η/960).
        let a = 1e-6;
        let s = SolverSettings::default();
        for eta in [1e-4, 1e-3] {
            let f = zero_temperature_free_energy(a, &PermittivityModel::IdealMetal, &dilute(eta), &s).unwrap();
            let want = -energy_unit(a) * eta * (1.0 - 457.0 * eta / 960.0);
            assert_relative_eq!(f, want, max_relative = 3.0 * eta * eta);
        }
    }

    #[test]
    fn truncation_is_stable() {
        let cfg = PlateConfig::new(1e-6, 300.0).unwrap();
        let (m, d) = (PermittivityModel::IdealMetal, PermittivityModel::Constant(7.0));
        let s = SolverSettings::default();
        let base = matsubara_free_energy(&cfg, &m, &d, &s, None).unwrap();
        let doubled = matsubara_free_energy(&cfg, &m, &d, &s, Some(2 * base.l_max)).unwrap();
        assert!(((base.value - doubled.value) / base.value).abs() < 10.0 * s.matsubara_tail_tol);
    }

    #[test]
    fn zero_temperature_pressure_scales_as_inverse_fourth_power() {
        let cfg = PlateConfig::new(8e-7, 0.0).unwrap();
        let (m, d) = (PermittivityModel::IdealMetal, PermittivityModel::Constant(4.0));
        let s = SolverSettings::default();
        let p = pressure(&cfg, &m, &d, &s).unwrap();
        let f = free_energy(&cfg, &m, &d, &s).unwrap();
        assert_relative_eq!(p, 3.0 * f / cfg.separation, max_relative = 1e-9);
    }

    #[test]
    fn relative_corrections_vanish_at_zero_temperature() {
        let cfg = PlateConfig::new(1e-6, 0.0).unwrap();
        let (m, d) = (PermittivityModel::IdealMetal, PermittivityModel::Constant(10.0));
        let s = SolverSettings::default();
        assert_eq!(relative_thermal_correction_f(&cfg, &m, &d, &s).unwrap(), 0.0);
        assert_eq!(relative_thermal_correction_p(&cfg, &m, &d, &s).unwrap(), 0.0);
        let r = evaluate(&cfg, &m, &d, &s).unwrap();
        assert_eq!((r.delta_f, r.delta_p, r.quantities.entropy), (0.0, 0.0, 0.0));
    }

    #[test]
    fn settings_validation() {
        let mut s = SolverSettings::default();
        assert!(s.validate().is_ok());
        s.matsubara_tail_tol = 0.0;
        assert!(s.validate().is_err());
        let s = SolverSettings {
            zero_temperature: ZeroTemperatureMethod::SmallTau { tau: 0.01 },
            ..SolverSettings::default()
        };
        assert!(matches!(s.validate(), Err(CasimirError::Config(_))));
    }

    #[test]
    fn sweep_spacing_and_validation() {
        let sp = SweepSpec {
            axis: SweepAxis::Separation,
            start: 1e-7,
            stop: 1.4e-6,
            steps: 14,
        };
        let v = sp.values();
        assert_eq!(v.len(), 14);
        assert_eq!(v[0], 1e-7);
        assert_eq!(v[13], 1.4e-6);
        assert!(SweepSpec { steps: 1, ..sp }.validate().is_err());
        assert!(SweepSpec { start: 0.0, ..sp }.validate().is_err());
        assert!(SweepSpec {
            axis: SweepAxis::Temperature,
            start: 0.0,
            ..sp
        }
        .validate()
        .is_ok());
    }
}
