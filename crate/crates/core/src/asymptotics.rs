//! Low-temperature behaviour for an ideal metal facing a dielectric of
//! frequency-independent permittivity ε₀.

use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, HBAR_C};
use crate::error::{CasimirError, Result};
use crate::lifshitz::PlateConfig;
use crate::numerics::ZETA3;

/// The expansion is trusted for τ up to this value.
pub const VALIDITY_TAU: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstEpsAsymptotics {
    pub eps0: f64,
    /// Plate separation, m.
    pub separation: f64,
    pub tau: f64,
}

impl ConstEpsAsymptotics {
    pub fn new(eps0: f64, separation: f64, tau: f64) -> Result<Self> {
        if !(eps0 >= 1.0) || !eps0.is_finite() {
            return Err(CasimirError::domain(format!("eps0 must be >= 1, got {eps0}")));
        }
        if !(separation > 0.0) || !(tau >= 0.0) || !tau.is_finite() {
            return Err(CasimirError::domain(format!(
                "need a > 0 and tau >= 0, got a = {separation}, tau = {tau}"
            )));
        }
        Ok(ConstEpsAsymptotics { eps0, separation, tau })
    }

    pub fn from_config(eps0: f64, cfg: &PlateConfig) -> Result<Self> {
        cfg.validate()?;
        ConstEpsAsymptotics::new(eps0, cfg.separation, cfg.tau())
    }

    pub fn is_valid(&self) -> bool {
        self.tau <= VALIDITY_TAU
    }

    /// (ε₀−1)²/(ε₀+1)
    pub fn strength(&self) -> f64 {
        (self.eps0 - 1.0).powi(2) / (self.eps0 + 1.0)
    }

    /// C in S ≈ C τ², J/(m² K).
    pub fn entropy_coefficient(&self) -> f64 {
        3.0 * BOLTZMANN * ZETA3 * self.strength() / (128.0 * PI.powi(3) * self.separation.powi(2))
    }
}

/// `F(a,0) − ħcζ(3)τ³(ε₀−1)²/(512π⁴a³(ε₀+1))`, with `f0` the zero-temperature
/// free energy in J/m².
pub fn const_eps_low_t_free_energy(x: &ConstEpsAsymptotics, f0: f64) -> f64 {
    f0 - HBAR_C * ZETA3 * x.tau.powi(3) * x.strength() / (512.0 * PI.powi(4) * x.separation.powi(3))
}

/// `3k_Bζ(3)τ²(ε₀−1)²/(128π³a²(ε₀+1))`, J/(m² K).
pub fn const_eps_low_t_entropy(x: &ConstEpsAsymptotics) -> f64 {
    x.entropy_coefficient() * x.tau * x.tau
}

/// Coefficient c in `F(it) − F(−it) ≈ i c τ²t²` at lowest order, `π(ε₀−1)²/(4(ε₀+1))`.
pub fn zero_freq_kernel_expansion(eps0: f64) -> Result<f64> {
    if !(eps0 >= 1.0) || !eps0.is_finite() {
        return Err(CasimirError::domain(format!("eps0 must be >= 1, got {eps0}")));
    }
    Ok(PI * (eps0 - 1.0).powi(2) / (4.0 * (eps0 + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifshitz::energy_unit;
    use crate::numerics::{integrate_semiinfinite, QuadratureSpec};
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_has_no_correction() {
        let x = ConstEpsAsymptotics::new(1.0, 1e-6, 0.05).unwrap();
        assert_eq!(const_eps_low_t_free_energy(&x, -3.0e-10), -3.0e-10);
        assert_eq!(const_eps_low_t_entropy(&x), 0.0);
        assert_eq!(zero_freq_kernel_expansion(1.0).unwrap(), 0.0);
    }

    #[test]
    fn kernel_coefficient() {
        assert_relative_eq!(zero_freq_kernel_expansion(3.0).unwrap(), PI / 4.0, max_relative = 1e-15);
        assert!(zero_freq_kernel_expansion(0.5).is_err());
    }

    #[test]
    fn bose_moment_reproduces_free_energy_coefficient() {
        let spec = QuadratureSpec::default().with_relative_tolerance(1e-12);
        // u = 2πt
        let m2 = integrate_semiinfinite(|u| u * u * (-u).exp() / -(-u).exp_m1(), 0.0, &spec)
            .unwrap()
            .value
            / (2.0 * PI).powi(3);
        assert_relative_eq!(m2, ZETA3 / (4.0 * PI.powi(3)), max_relative = 1e-11);
        let (eps0, a, tau) = (7.0, 6e-7, 0.05);
        let x = ConstEpsAsymptotics::new(eps0, a, tau).unwrap();
        let via_kernel = -energy_unit(a) * tau * zero_freq_kernel_expansion(eps0).unwrap() * tau * tau * m2;
        assert_relative_eq!(const_eps_low_t_free_energy(&x, 0.0), via_kernel, max_relative = 1e-10);
    }

    #[test]
    fn entropy_is_minus_temperature_derivative() {
        let a = 4e-7;
        let f = |t: f64| {
            let cfg = PlateConfig::new(a, t).unwrap();
            const_eps_low_t_free_energy(&ConstEpsAsymptotics::from_config(10.0, &cfg).unwrap(), 0.0)
        };
        let t = 20.0;
        let h = 1e-3;
        let s = -(f(t + h) - f(t - h)) / (2.0 * h);
        let x = ConstEpsAsymptotics::from_config(10.0, &PlateConfig::new(a, t).unwrap()).unwrap();
        assert_relative_eq!(const_eps_low_t_entropy(&x), s, max_relative = 1e-6);
    }

    #[test]
    fn dilute_limit_matches_second_order_entropy() {
        let eta = 1e-3;
        let x = ConstEpsAsymptotics::new(1.0 + eta, 1e-6, 0.05).unwrap();
        let dilute_eta2 = BOLTZMANN / (32.0 * PI * 1e-12) * eta * eta * 0.05f64.powi(2) * 3.0 * ZETA3 / (8.0 * PI * PI);
        assert_relative_eq!(const_eps_low_t_entropy(&x), dilute_eta2, max_relative = 1e-3);
    }

    #[test]
    fn validity_flag() {
        assert!(ConstEpsAsymptotics::new(5.0, 1e-6, 0.1).unwrap().is_valid());
        assert!(!ConstEpsAsymptotics::new(5.0, 1e-6, 0.11).unwrap().is_valid());
    }
}
