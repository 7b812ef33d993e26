//! Dielectric permittivity along the imaginary frequency axis, ε(iξ).

mod kramers_kronig;
mod optical;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::numerics::{integrate_finite, QuadratureSpec};

pub use kramers_kronig::{kramers_kronig, kramers_kronig_excess, AbsorptionSpectrum, AnalyticSpectrum};
pub use optical::{im_eps_from_nk, load_optical_csv, FrequencyUnit, OpticalDataset, OpticalSample, MIN_ROWS, MIN_SPAN};

/// Largest dilute parameter accepted.
pub const DILUTE_MAX_ETA: f64 = 0.2;
/// Above this the two-term dilute expansion is of doubtful accuracy.
pub const DILUTE_WARN_ETA: f64 = 0.1;
/// Tabulated absorption below this level is treated as zero when continuing
/// the data past its highest frequency.
pub const ABSORPTION_CUTOFF: f64 = 1e-8;

/// Value of ε(iξ). Perfect conductors are a separate variant so that no
/// floating-point infinity enters the arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(f64),
    Infinite,
}

impl Permittivity {
    pub fn finite(self) -> Option<f64> {
        match self {
            Permittivity::Finite(e) => Some(e),
            Permittivity::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    /// Plasma frequency, rad/s.
    pub plasma_frequency: f64,
    /// Relaxation frequency, rad/s.
    pub damping: f64,
}

impl DrudeParams {
    /// Conventional gold values.
    pub const GOLD: DrudeParams = DrudeParams {
        plasma_frequency: 1.37e16,
        damping: 5.3e13,
    };

    pub fn new(plasma_frequency: f64, damping: f64) -> Result<Self> {
        let p = DrudeParams {
            plasma_frequency,
            damping,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (wp, g) = (self.plasma_frequency, self.damping);
        if !(wp > 0.0 && wp.is_finite()) || !(g > 0.0) || !(g < wp) {
            return Err(CasimirError::domain(format!(
                "Drude parameters need 0 < gamma < omega_p, got omega_p = {wp}, gamma = {g}"
            )));
        }
        Ok(())
    }

    /// ε(iξ) = 1 + ω_p²/(ξ(ξ+γ)).
    pub fn epsilon(&self, xi: f64) -> Permittivity {
        if xi == 0.0 {
            return Permittivity::Infinite;
        }
        let wp = self.plasma_frequency;
        Permittivity::Finite(1.0 + wp * wp / (xi * (xi + self.damping)))
    }

    /// Im ε(ω) on the real axis.
    pub fn im_eps(&self, omega: f64) -> f64 {
        let (wp, g) = (self.plasma_frequency, self.damping);
        wp * wp * g / (omega * (omega * omega + g * g))
    }

    /// `(2/π) ∫₀^W ω Im ε(ω)/(ω²+ξ²) dω` in closed form.
    fn low_frequency_excess(&self, xi: f64, upper: f64) -> Result<f64> {
        let (wp, g) = (self.plasma_frequency, self.damping);
        let c = 2.0 / PI * wp * wp * g;
        if ((xi - g) / g).abs() > 1e-3 {
            let bracket = (upper / g).atan() / g - (upper / xi).atan() / xi;
            return Ok(c * bracket / (xi * xi - g * g));
        }
        let spec = QuadratureSpec::default().with_relative_tolerance(1e-12);
        let v = integrate_finite(|w| 1.0 / ((w * w + g * g) * (w * w + xi * xi)), 0.0, upper, &spec)?.value;
        Ok(c * v)
    }
}

/// Two-oscillator (infrared + ultraviolet) representation
/// `ε(iξ) = 1 + C_IR/(1+ξ²/ω_IR²) + C_UV/(1+ξ²/ω_UV²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NinhamParsegian {
    pub c_ir: f64,
    pub omega_ir: f64,
    pub c_uv: f64,
    pub omega_uv: f64,
}

impl NinhamParsegian {
    pub fn new(c_ir: f64, omega_ir: f64, c_uv: f64, omega_uv: f64) -> Result<Self> {
        let m = NinhamParsegian {
            c_ir,
            omega_ir,
            c_uv,
            omega_uv,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.c_ir >= 0.0
            && self.c_uv >= 0.0
            && self.omega_ir > 0.0
            && self.omega_uv.is_finite()
            && self.omega_ir < self.omega_uv
            && self.c_ir.is_finite()
            && self.c_uv.is_finite();
        if !ok {
            return Err(CasimirError::domain(format!(
                "Ninham-Parsegian parameters need C >= 0 and 0 < omega_IR < omega_UV, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn epsilon(&self, xi: f64) -> f64 {
        let ir = xi / self.omega_ir;
        let uv = xi / self.omega_uv;
        1.0 + self.c_ir / (1.0 + ir * ir) + self.c_uv / (1.0 + uv * uv)
    }
}

/// Optical data with an optional Drude model below the lowest sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedModel {
    data: Arc<OpticalDataset>,
    extrapolation: Option<DrudeParams>,
    /// Power-law continuation above the table: exponent and cutoff frequency.
    tail: Option<(f64, f64)>,
    quadrature: QuadratureSpec,
}

impl TabulatedModel {
    pub fn new(data: OpticalDataset, extrapolation: Option<DrudeParams>) -> Result<Self> {
        if let Some(d) = &extrapolation {
            d.validate()?;
        }
        let rows = data.rows();
        let (a, b) = (rows[rows.len() - 2], rows[rows.len() - 1]);
        let (ea, eb) = (a.im_eps(), b.im_eps());
        let tail = if ea > 0.0 && eb > ABSORPTION_CUTOFF && eb < ea {
            let p = (eb / ea).ln() / (b.omega / a.omega).ln();
            let cutoff = b.omega * (ABSORPTION_CUTOFF / eb).powf(1.0 / p);
            Some((p, cutoff))
        } else {
            None
        };
        Ok(TabulatedModel {
            data: Arc::new(data),
            extrapolation,
            tail,
            quadrature: QuadratureSpec::default().with_relative_tolerance(1e-9),
        })
    }

    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Self {
        self.quadrature = spec;
        self
    }

    pub fn dataset(&self) -> &OpticalDataset {
        &self.data
    }

    pub fn extrapolation(&self) -> Option<&DrudeParams> {
        self.extrapolation.as_ref()
    }

    /// Frequencies at which ε(iξ) may be requested.
    pub fn trusted_range(&self) -> (f64, f64) {
        (0.0, self.data.omega_max())
    }

    pub fn epsilon(&self, xi: f64) -> Result<Permittivity> {
        let (lo, hi) = self.trusted_range();
        if !(xi >= lo && xi <= hi) {
            return Err(CasimirError::Range { xi, min: lo, max: hi });
        }
        let w0 = self.data.omega_min();
        let drude = match &self.extrapolation {
            Some(_) if xi == 0.0 => return Ok(Permittivity::Infinite),
            Some(d) => d.low_frequency_excess(xi, w0)?,
            None => 0.0,
        };
        let table = if xi == 0.0 {
            self.static_excess()?
        } else {
            kramers_kronig_excess(self, xi, &self.quadrature)?
        };
        Ok(Permittivity::Finite(1.0 + drude + table))
    }

    /// `(2/π) ∫ Im ε(ω)/ω dω` over the tabulated range and its continuation.
    fn static_excess(&self) -> Result<f64> {
        let knots = self.knots();
        let mut total = 0.0;
        for pair in knots.windows(2) {
            total += integrate_finite(|s| self.im_eps(s.exp()), pair[0].ln(), pair[1].ln(), &self.quadrature)?.value;
        }
        Ok(2.0 / PI * total)
    }
}

impl AbsorptionSpectrum for TabulatedModel {
    /// Log-log interpolation inside the table, power-law continuation above
    /// it, zero below it (the Drude part there is handled in closed form).
    fn im_eps(&self, omega: f64) -> f64 {
        let rows = self.data.rows();
        let n = rows.len();
        if omega < rows[0].omega {
            return 0.0;
        }
        if omega > rows[n - 1].omega {
            return match self.tail {
                Some((p, cutoff)) if omega <= cutoff => rows[n - 1].im_eps() * (omega / rows[n - 1].omega).powf(p),
                _ => 0.0,
            };
        }
        let i = rows.partition_point(|r| r.omega <= omega).clamp(1, n - 1);
        let (a, b) = (rows[i - 1], rows[i]);
        let (ea, eb) = (a.im_eps(), b.im_eps());
        let t = if ea > 0.0 && eb > 0.0 {
            (omega / a.omega).ln() / (b.omega / a.omega).ln()
        } else {
            (omega - a.omega) / (b.omega - a.omega)
        };
        if ea > 0.0 && eb > 0.0 {
            (ea.ln() + t * (eb / ea).ln()).exp()
        } else {
            ea + t * (eb - ea)
        }
    }

    fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.data.rows().iter().map(|r| r.omega).collect();
        if let Some((_, cutoff)) = self.tail {
            k.push(cutoff);
        }
        k
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    IdealMetal,
    Constant(f64),
    Dilute(f64),
    NinhamParsegian(NinhamParsegian),
    Drude(DrudeParams),
    Tabulated(TabulatedModel),
}

impl PermittivityModel {
    pub fn constant(eps0: f64) -> Result<Self> {
        if !(eps0 >= 1.0) || !eps0.is_finite() {
            return Err(CasimirError::domain(format!(
                "constant permittivity must be >= 1, got {eps0}"
            )));
        }
        Ok(PermittivityModel::Constant(eps0))
    }

    pub fn dilute(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= DILUTE_MAX_ETA) {
            return Err(CasimirError::domain(format!(
                "dilute parameter must lie in (0, {DILUTE_MAX_ETA}], got {eta}"
            )));
        }
        if eta > DILUTE_WARN_ETA {
            log::warn!("dilute parameter {eta} exceeds {DILUTE_WARN_ETA}; second-order expansion may be inaccurate");
        }
        Ok(PermittivityModel::Dilute(eta))
    }

    pub fn ninham_parsegian(c_ir: f64, omega_ir: f64, c_uv: f64, omega_uv: f64) -> Result<Self> {
        Ok(PermittivityModel::NinhamParsegian(NinhamParsegian::new(
            c_ir, omega_ir, c_uv, omega_uv,
        )?))
    }

    pub fn drude(plasma_frequency: f64, damping: f64) -> Result<Self> {
        Ok(PermittivityModel::Drude(DrudeParams::new(plasma_frequency, damping)?))
    }

    pub fn tabulated(data: OpticalDataset, extrapolation: Option<DrudeParams>) -> Result<Self> {
        Ok(PermittivityModel::Tabulated(TabulatedModel::new(data, extrapolation)?))
    }

    /// Re-checks the constructor invariants, for values built directly.
    pub fn validate(&self) -> Result<()> {
        match self {
            PermittivityModel::IdealMetal | PermittivityModel::Tabulated(_) => Ok(()),
            PermittivityModel::Constant(e) => PermittivityModel::constant(*e).map(|_| ()),
            PermittivityModel::Dilute(eta) => PermittivityModel::dilute(*eta).map(|_| ()),
            PermittivityModel::NinhamParsegian(np) => np.validate(),
            PermittivityModel::Drude(d) => d.validate(),
        }
    }

    pub fn eval_epsilon(&self, xi: f64) -> Result<Permittivity> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(CasimirError::domain(format!("xi must be finite and >= 0, got {xi}")));
        }
        Ok(match self {
            PermittivityModel::IdealMetal => Permittivity::Infinite,
            PermittivityModel::Constant(e) => Permittivity::Finite(*e),
            PermittivityModel::Dilute(eta) => Permittivity::Finite(1.0 + eta),
            PermittivityModel::NinhamParsegian(np) => Permittivity::Finite(np.epsilon(xi)),
            PermittivityModel::Drude(d) => d.epsilon(xi),
            PermittivityModel::Tabulated(t) => t.epsilon(xi)?,
        })
    }

    /// Whether ε does not depend on frequency.
    pub fn is_frequency_independent(&self) -> bool {
        matches!(
            self,
            PermittivityModel::IdealMetal | PermittivityModel::Constant(_) | PermittivityModel::Dilute(_)
        )
    }
}

pub fn eval_epsilon(model: &PermittivityModel, xi: f64) -> Result<Permittivity> {
    model.eval_epsilon(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn alumina() -> PermittivityModel {
        PermittivityModel::ninham_parsegian(7.03, 1e14, 2.072, 2e16).unwrap()
    }

    fn synthetic_drude_table() -> OpticalDataset {
        // n₁, n₂ such that 2 n₁ n₂ equals the Drude absorption and n₁ = 1.
        let d = DrudeParams::GOLD;
        let rows = (0..60)
            .map(|k| {
                let omega = 1e14 * 10f64.powf(k as f64 / 20.0);
                OpticalSample {
                    omega,
                    n1: 1.0,
                    n2: d.im_eps(omega) / 2.0,
                }
            })
            .collect();
        OpticalDataset::new(rows, "synthetic Drude").unwrap()
    }

    #[test]
    fn alumina_static_and_infrared_values() {
        let m = alumina();
        assert_relative_eq!(
            m.eval_epsilon(0.0).unwrap().finite().unwrap(),
            10.102,
            max_relative = 1e-12
        );
        let want = 1.0 + 7.03 / 2.0 + 2.072 / (1.0 + (1e14f64 / 2e16).powi(2));
        assert_relative_eq!(
            m.eval_epsilon(1e14).unwrap().finite().unwrap(),
            want,
            max_relative = 1e-14
        );
        assert_relative_eq!(want, 6.587, max_relative = 1e-4);
    }

    #[test]
    fn constant_and_dilute_are_flat_and_agree() {
        let c = PermittivityModel::constant(10.0).unwrap();
        assert_eq!(c.eval_epsilon(3e15).unwrap(), Permittivity::Finite(10.0));
        let d = PermittivityModel::dilute(0.05).unwrap();
        let c2 = PermittivityModel::constant(1.05).unwrap();
        for xi in [0.0, 1e13, 1e16] {
            assert_eq!(d.eval_epsilon(xi).unwrap(), c2.eval_epsilon(xi).unwrap());
        }
    }

    #[test]
    fn constructor_invariants() {
        assert!(PermittivityModel::constant(0.5).is_err());
        assert!(PermittivityModel::dilute(0.0).is_err());
        assert!(PermittivityModel::dilute(0.25).is_err());
        assert!(PermittivityModel::dilute(0.15).is_ok());
        assert!(PermittivityModel::ninham_parsegian(1.0, 1e16, 1.0, 1e14).is_err());
        assert!(PermittivityModel::ninham_parsegian(-1.0, 1e14, 1.0, 1e16).is_err());
        assert!(DrudeParams::new(1e13, 1e14).is_err());
        assert!(DrudeParams::new(1e16, 0.0).is_err());
        assert!(PermittivityModel::IdealMetal.eval_epsilon(-1.0).is_err());
    }

    #[test]
    fn ideal_metal_and_drude_static_are_infinite() {
        assert_eq!(
            PermittivityModel::IdealMetal.eval_epsilon(1e15).unwrap(),
            Permittivity::Infinite
        );
        assert_eq!(
            PermittivityModel::Drude(DrudeParams::GOLD).eval_epsilon(0.0).unwrap(),
            Permittivity::Infinite
        );
    }

    #[test]
    fn tabulated_drude_reproduces_closed_form() {
        let m = PermittivityModel::tabulated(synthetic_drude_table(), Some(DrudeParams::GOLD)).unwrap();
        let d = DrudeParams::GOLD;
        for xi in [1e13, 5.3e13, 1e14, 1e15, 1e16, 5e16] {
            let got = m.eval_epsilon(xi).unwrap().finite().unwrap();
            let want = d.epsilon(xi).finite().unwrap();
            // The table stops at 1e17 and the continuation is cut at 1e-8.
            assert_relative_eq!(got, want, max_relative = 1e-4);
        }
        assert_eq!(m.eval_epsilon(0.0).unwrap(), Permittivity::Infinite);
    }

    #[test]
    fn tabulated_range_error_above_table() {
        let m = PermittivityModel::tabulated(synthetic_drude_table(), None).unwrap();
        assert!(matches!(m.eval_epsilon(1e18), Err(CasimirError::Range { .. })));
        let e0 = m.eval_epsilon(0.0).unwrap().finite().unwrap();
        let e1 = m.eval_epsilon(1e15).unwrap().finite().unwrap();
        assert!(e0.is_finite() && e0 >= e1 && e1 >= 1.0);
    }

    #[test]
    fn monotone_decrease_and_high_frequency_limit() {
        let m = alumina();
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let xi = 1e12 * 10f64.powf(k as f64 * 0.15);
            let e = m.eval_epsilon(xi).unwrap().finite().unwrap();
            assert!(e <= prev && e >= 1.0);
            prev = e;
        }
        assert!(m.eval_epsilon(1e22).unwrap().finite().unwrap() - 1.0 < 1e-8);
    }
}
