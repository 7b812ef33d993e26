//! Ideal metal facing a dilute dielectric, ε = 1 + η with η ≪ 1.
//!
//! Closed forms exact in temperature at first and second order in η, the
//! Abel–Plana representation of the same Matsubara sum, and the low- and
//! high-temperature asymptotics. Every function first computes a reduced
//! dimensionless value and then scales it:
//!
//! * free energy in units of ħc/(32π²a³),
//! * entropy in units of k_B/(8πa²),
//! * pressure in units of ħc/(32π²a⁴).

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, HBAR_C};
use crate::error::{CasimirError, Result};
use crate::lifshitz::{energy_unit, PlateConfig};
use crate::numerics::{
    ei_power_sum, exp_integral_ei, integrate_semiinfinite, sine_integral_complement, QuadratureSpec, SeriesSpec, ZETA3,
};
use crate::permittivity::DILUTE_MAX_ETA;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiluteParams {
    pub eta: f64,
    pub tau: f64,
    /// Plate separation, m.
    pub separation: f64,
}

impl DiluteParams {
    pub fn new(eta: f64, tau: f64, separation: f64) -> Result<Self> {
        let p = DiluteParams { eta, tau, separation };
        p.validate()?;
        Ok(p)
    }

    pub fn from_config(eta: f64, cfg: &PlateConfig) -> Result<Self> {
        cfg.validate()?;
        DiluteParams::new(eta, cfg.tau(), cfg.separation)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= DILUTE_MAX_ETA) {
            return Err(CasimirError::domain(format!(
                "dilute parameter must lie in (0, {DILUTE_MAX_ETA}], got {}",
                self.eta
            )));
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return Err(CasimirError::domain(format!("tau must be >= 0, got {}", self.tau)));
        }
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(CasimirError::domain(format!(
                "separation must be positive, got {}",
                self.separation
            )));
        }
        Ok(())
    }

    fn require_positive_tau(&self) -> Result<()> {
        self.validate()?;
        if self.tau == 0.0 {
            return Err(CasimirError::domain(
                "the closed forms need tau > 0; use the low-temperature forms at T = 0",
            ));
        }
        Ok(())
    }
}

/// k_B/(8πa²), J/(m² K).
pub fn entropy_unit(separation: f64) -> f64 {
    BOLTZMANN / (8.0 * PI * separation * separation)
}

/// ħc/(32π²a⁴), Pa.
pub fn pressure_unit(separation: f64) -> f64 {
    HBAR_C / (32.0 * PI * PI * separation.powi(4))
}

/// Exponentials of −τ used by the closed forms, written so that nothing
/// overflows for large τ and 1 − e^{−kτ} keeps full precision for small τ.
struct Exps {
    tau: f64,
    q: f64,
    q2: f64,
    om: f64,
    om2: f64,
    om4: f64,
}

impl Exps {
    fn new(tau: f64) -> Self {
        let q = (-tau).exp();
        Exps {
            tau,
            q,
            q2: q * q,
            om: -(-tau).exp_m1(),
            om2: -(-2.0 * tau).exp_m1(),
            om4: -(-4.0 * tau).exp_m1(),
        }
    }

    /// 1 + 4e^{−2τ} + e^{−4τ}
    fn quartic(&self) -> f64 {
        1.0 + 4.0 * self.q2 + self.q2 * self.q2
    }

    /// τ e^{−τ}((1+τ)e^{−τ} − (1−τ)) / (1−e^{−τ})³
    fn cubic_ratio(&self) -> f64 {
        let t = self.tau;
        t * self.q * (t * (1.0 + self.q) - self.om) / self.om.powi(3)
    }
}

fn ei_sums(tau: f64) -> Result<(f64, f64)> {
    let spec = SeriesSpec::exhaustive();
    Ok((ei_power_sum(2, tau, &spec)?, ei_power_sum(4, tau, &spec)?))
}

/// Reduced free energy from the closed form, exact in τ.
pub fn reduced_free_energy(eta: f64, tau: f64) -> Result<f64> {
    let e = Exps::new(tau);
    let (s2, s4) = ei_sums(tau)?;
    let first = (e.om2 + 2.0 * tau * e.q) / (4.0 * e.om * e.om);
    let second = 2.0 * (e.om2 + 2.0 * tau * e.q) / (e.om * e.om) - (e.om4 + 4.0 * tau * e.q2) / (4.0 * e.om2 * e.om2)
        + tau * tau * e.q2 * (-(e.om4) + 2.0 * tau * e.quartic()) / (2.0 * e.om2.powi(4))
        + 2.0 * tau.powi(4) * s4
        - 2.0 * tau * tau * s2;
    Ok(-(eta * tau * first - eta * eta * tau / 16.0 * second))
}

/// The reduced entropy split into its elementary part and its Ei-series part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTerms {
    pub elementary: f64,
    /// `(η²/16) Σ (6τ²l² − 10τ⁴l⁴) Ei(−2τl)`
    pub ei_series: f64,
}

impl EntropyTerms {
    pub fn total(&self) -> f64 {
        self.elementary + self.ei_series
    }
}

pub fn reduced_entropy_terms(eta: f64, tau: f64) -> Result<EntropyTerms> {
    let e = Exps::new(tau);
    let (s2, s4) = ei_sums(tau)?;
    let first = (1.0 + e.q) / (2.0 * e.om) - e.cubic_ratio();
    let second =
        (7.0 + 9.0 * e.q) / (4.0 * e.om) - 4.0 * e.cubic_ratio() - e.q2 * (2.0 * tau + e.om2) / (2.0 * e.om2 * e.om2)
            + tau * tau * e.q2 * (-3.0 * e.om4 + 10.0 * tau * e.quartic()) / (2.0 * e.om2.powi(4));
    Ok(EntropyTerms {
        elementary: eta / 2.0 * first - eta * eta / 16.0 * second,
        ei_series: eta * eta / 16.0 * (6.0 * tau * tau * s2 - 10.0 * tau.powi(4) * s4),
    })
}

/// Below this τ the reduced entropy is taken from the Abel–Plana integral.
pub const ENTROPY_SMALL_TAU: f64 = 0.1;

pub fn reduced_entropy(eta: f64, tau: f64) -> Result<f64> {
    if tau > 0.0 && tau < ENTROPY_SMALL_TAU {
        return abel_plana_reduced_entropy(eta, tau);
    }
    Ok(reduced_entropy_terms(eta, tau)?.total())
}

pub fn reduced_pressure(eta: f64, tau: f64) -> Result<f64> {
    let e = Exps::new(tau);
    let (_, s4) = ei_sums(tau)?;
    let a1 = (e.om2 + 2.0 * tau * e.q) / (e.om * e.om) + tau * tau * e.q * (1.0 + e.q) / e.om.powi(3);
    let b = a1
        - (e.om4 + 4.0 * tau * e.q2) / (8.0 * e.om2 * e.om2)
        - tau.powi(3) * e.q2 * e.quartic() / (2.0 * e.om2.powi(4))
        - tau.powi(4) * s4;
    Ok(-tau * (eta / 2.0 * a1 - eta * eta / 4.0 * b))
}

/// Free energy per unit area, J/m². Requires τ > 0.
pub fn dilute_free_energy(p: &DiluteParams) -> Result<f64> {
    p.require_positive_tau()?;
    Ok(energy_unit(p.separation) * reduced_free_energy(p.eta, p.tau)?)
}

/// Entropy per unit area, J/(m² K). Requires τ > 0.
pub fn dilute_entropy(p: &DiluteParams) -> Result<f64> {
    p.require_positive_tau()?;
    Ok(entropy_unit(p.separation) * reduced_entropy(p.eta, p.tau)?)
}

/// Pressure, Pa. Requires τ > 0.
pub fn dilute_pressure(p: &DiluteParams) -> Result<f64> {
    p.require_positive_tau()?;
    Ok(pressure_unit(p.separation) * reduced_pressure(p.eta, p.tau)?)
}

/// The Matsubara summand after the y-integration, as a function of x = τl:
/// `η/2 (1+x)e^{−x} − η²/16 [4(1+x)e^{−x} − ½(1+2x+x²−2x³)e^{−2x} − 2x²(1−x²)Ei(−2x)]`.
pub fn abel_plana_summand(eta: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(CasimirError::domain(format!("summand needs x >= 0, got {x}")));
    }
    let ex = (-x).exp();
    let ei_term = if x == 0.0 {
        0.0
    } else {
        2.0 * x * x * (1.0 - x * x) * exp_integral_ei(-2.0 * x)?
    };
    let bracket = 4.0 * (1.0 + x) * ex - 0.5 * (1.0 + 2.0 * x + x * x - 2.0 * x.powi(3)) * ex * ex - ei_term;
    Ok(eta / 2.0 * (1.0 + x) * ex - eta * eta / 16.0 * bracket)
}

fn integration_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_relative_tolerance(1e-12)
}

/// `∫₀^∞ F(x) dx` of [`abel_plana_summand`]; equals τ times the zero-temperature
/// part of the Abel–Plana formula.
pub fn zero_temperature_integral(eta: f64) -> Result<f64> {
    let mut failure = None;
    let r = integrate_semiinfinite(
        |x| match abel_plana_summand(eta, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        &integration_spec(),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// `s cos s − sin s`, by its Taylor series for small s.
fn cos_sin_combination(s: f64) -> f64 {
    if s.abs() > 0.5 {
        let (sn, cs) = s.sin_cos();
        return s * cs - sn;
    }
    // Σ (−1)ⁿ 2n s^{2n+1}/(2n+1)!
    let s2 = s * s;
    let mut power = s;
    let mut factorial = 1.0;
    let mut sum = 0.0;
    for n in 1..20 {
        power *= -s2;
        factorial *= (2 * n) as f64 * (2 * n + 1) as f64;
        let term = 2.0 * n as f64 * power / factorial;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `−i[F(is) − F(−is)]` for the analytically continued summand, real s ≥ 0.
pub fn continued_difference(eta: f64, s: f64) -> Result<f64> {
    let (sn2, cs2) = (2.0 * s).sin_cos();
    let base = cos_sin_combination(s);
    let d = sine_integral_complement(2.0 * s)?;
    let second =
        8.0 * base - ((2.0 * s + 2.0 * s.powi(3)) * cs2 - (1.0 - s * s) * sn2) + 4.0 * s * s * (1.0 + s * s) * d;
    Ok(eta * base - eta * eta / 16.0 * second)
}

/// Derivative of [`continued_difference`] with respect to s.
pub fn continued_difference_derivative(eta: f64, s: f64) -> Result<f64> {
    let sn = s.sin();
    let (sn2, cs2) = (2.0 * s).sin_cos();
    let d = sine_integral_complement(2.0 * s)?;
    let second = -8.0 * s * sn - 8.0 * s * s * cs2 - 2.0 * s * sn2 + (8.0 * s + 16.0 * s.powi(3)) * d;
    Ok(-eta * s * sn - eta * eta / 16.0 * second)
}

/// `−(1/2π) ∫₀^∞ g(τu/2π)/(e^u − 1) du`.
fn bose_weighted<G: Fn(f64) -> Result<f64>>(g: G, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(CasimirError::domain(format!("tau must be positive, got {tau}")));
    }
    let mut failure = None;
    let r = integrate_semiinfinite(
        |u| {
            let bose = (-u).exp() / -(-u).exp_m1();
            match g(tau * u / (2.0 * PI)) {
                Ok(v) => v * bose,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        &integration_spec(),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(-r.value / (2.0 * PI)),
    }
}

/// `i∫₀^∞ [F(it) − F(−it)]/(e^{2πt} − 1) dt` evaluated exactly.
pub fn thermal_integral(eta: f64, tau: f64) -> Result<f64> {
    // u = 2πt turns the Bose factor into 1/(e^u − 1).
    bose_weighted(|s| continued_difference(eta, s), tau)
}

/// Reduced entropy `d(τ I₂)/dτ` from the Abel–Plana form. Free of the
/// cancellations that the closed form suffers as τ → 0.
pub fn abel_plana_reduced_entropy(eta: f64, tau: f64) -> Result<f64> {
    bose_weighted(
        |s| Ok(continued_difference(eta, s)? + s * continued_difference_derivative(eta, s)?),
        tau,
    )
}

/// Small-τ expansion of [`thermal_integral`]:
/// `ητ³/720 − (η²τ²/32)(τ/10 − ζ(3)/π²)`.
pub fn thermal_integral_expansion(eta: f64, tau: f64) -> f64 {
    eta * tau.powi(3) / 720.0 - eta * eta * tau * tau / 32.0 * (tau / 10.0 - ZETA3 / (PI * PI))
}

/// Free energy from the Abel–Plana form of the Matsubara sum, J/m².
pub fn abel_plana_free_energy(p: &DiluteParams) -> Result<f64> {
    p.require_positive_tau()?;
    let zero = zero_temperature_integral(p.eta)?;
    let thermal = thermal_integral(p.eta, p.tau)?;
    Ok(-energy_unit(p.separation) * (zero + p.tau * thermal))
}

/// Zero-temperature free energy, `−(ħc/32π²a³) η (1 − 457η/960)`.
pub fn zero_temperature_free_energy(eta: f64, separation: f64) -> f64 {
    -energy_unit(separation) * eta * (1.0 - 457.0 * eta / 960.0)
}

/// Zero-temperature pressure, `−(ħc/32π²a⁴) η (3 − 457η/320)`.
pub fn zero_temperature_pressure(eta: f64, separation: f64) -> f64 {
    -pressure_unit(separation) * eta * (3.0 - 457.0 * eta / 320.0)
}

pub fn low_t_free_energy(p: &DiluteParams) -> f64 {
    let (eta, t) = (p.eta, p.tau);
    let bracket = 457.0 / 30.0 - ZETA3 * t.powi(3) / (PI * PI) + t.powi(4) / 10.0;
    -energy_unit(p.separation) * eta * (1.0 + t.powi(4) / 720.0 - eta / 32.0 * bracket)
}

pub fn low_t_entropy(p: &DiluteParams) -> f64 {
    let (eta, t) = (p.eta, p.tau);
    let inner = t / 45.0 + eta / 4.0 * (3.0 * ZETA3 / (2.0 * PI * PI) - t / 5.0);
    BOLTZMANN / (32.0 * PI * p.separation.powi(2)) * eta * t * t * inner
}

pub fn low_t_pressure(p: &DiluteParams) -> f64 {
    let (eta, t) = (p.eta, p.tau);
    let t4 = t.powi(4);
    -pressure_unit(p.separation) * eta * (3.0 - t4 / 720.0 - eta / 320.0 * (457.0 - t4))
}

/// `k_B T / (32πa²)` written through τ.
fn thermal_scale(p: &DiluteParams) -> f64 {
    energy_unit(p.separation) * p.tau / 4.0
}

pub fn high_t_free_energy(p: &DiluteParams) -> f64 {
    -thermal_scale(p) * p.eta * (1.0 - 7.0 * p.eta / 16.0)
}

pub fn high_t_entropy(p: &DiluteParams) -> f64 {
    BOLTZMANN / (32.0 * PI * p.separation.powi(2)) * p.eta * (1.0 - 7.0 * p.eta / 16.0)
}

pub fn high_t_pressure(p: &DiluteParams) -> f64 {
    -2.0 * thermal_scale(p) / p.separation * p.eta * (1.0 - 7.0 * p.eta / 16.0)
}

/// (P(T) − P(0))/P(0) from the closed form.
pub fn relative_thermal_correction_p(p: &DiluteParams) -> Result<f64> {
    if p.tau == 0.0 {
        p.validate()?;
        return Ok(0.0);
    }
    let p0 = zero_temperature_pressure(p.eta, p.separation);
    Ok((dilute_pressure(p)? - p0) / p0)
}

/// (F(T) − F(0))/F(0) from the closed form.
pub fn relative_thermal_correction_f(p: &DiluteParams) -> Result<f64> {
    if p.tau == 0.0 {
        p.validate()?;
        return Ok(0.0);
    }
    let f0 = zero_temperature_free_energy(p.eta, p.separation);
    Ok((dilute_free_energy(p)? - f0) / f0)
}
