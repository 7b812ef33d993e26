//! Exponential and sine integrals, Riemann zeta at 3, and the `l^p Ei(-2τl)`
//! series that appear in the dilute-dielectric closed forms.

use std::f64::consts::FRAC_PI_2;

use crate::constants::EULER_GAMMA;
use crate::error::{CasimirError, Result};
use crate::numerics::quadrature::{integrate_semiinfinite, QuadratureSpec};

/// Riemann zeta function at 3 (Apéry's constant).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

pub fn riemann_zeta3() -> f64 {
    ZETA3
}

/// Truncation controls for slowly converging sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub tail_tolerance: f64,
    pub max_terms: usize,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec {
            tail_tolerance: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesSpec {
    /// Sums to the limit of double precision.
    pub fn exhaustive() -> Self {
        SeriesSpec {
            tail_tolerance: 1e-17,
            ..SeriesSpec::default()
        }
    }
}

/// Exponential integral E1(z) for z > 0.
///
/// Power series up to z = 1, modified Lentz evaluation of the continued
/// fraction beyond.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(CasimirError::domain(format!("E1 requires z > 0, got {z}")));
    }
    if z <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -z / kf;
            let add = term / kf;
            sum += add;
            if add.abs() < f64::EPSILON * sum.abs() {
                break;
            }
        }
        return Ok(-EULER_GAMMA - z.ln() - sum);
    }
    if z > 740.0 {
        return Ok(0.0);
    }
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h * (-z).exp());
        }
    }
    Err(CasimirError::ToleranceNotMet {
        context: "E1 continued fraction",
        estimate: h * (-z).exp(),
        error: f64::NAN,
    })
}

/// Principal-value exponential integral Ei(x) for x < 0.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(CasimirError::domain(format!(
            "Ei is only provided for negative arguments, got {x}"
        )));
    }
    Ok(-exp_integral_e1(-x)?)
}

/// `Σ_{l≥1} l^p Ei(-2τl)` for `p` in {2, 4}.
///
/// All terms are negative. Summation stops once past the peak of `l^p e^{-2τl}`
/// and the geometric bound on the remainder drops below
/// `tail_tolerance * |partial sum|`.
pub fn ei_power_sum(p: u32, tau: f64, spec: &SeriesSpec) -> Result<f64> {
    if p != 2 && p != 4 {
        return Err(CasimirError::domain(format!("power {p} not in {{2, 4}}")));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(CasimirError::domain(format!("tau must be positive, got {tau}")));
    }
    let peak = p as f64 / (2.0 * tau);
    let mut sum = 0.0;
    for l in 1..=spec.max_terms {
        let lf = l as f64;
        let term = lf.powi(p as i32) * exp_integral_ei(-2.0 * tau * lf)?;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if lf > peak {
            // Ratio of consecutive terms is below e^{-2τ} ((l+1)/l)^p.
            let ratio = (-2.0 * tau).exp() * ((lf + 1.0) / lf).powi(p as i32);
            if ratio < 1.0 {
                let tail = term.abs() * ratio / (1.0 - ratio);
                if tail <= spec.tail_tolerance * sum.abs() {
                    return Ok(sum);
                }
            }
        }
    }
    Err(CasimirError::ToleranceNotMet {
        context: "Ei power sum",
        estimate: sum,
        error: f64::NAN,
    })
}

/// Sine integral Si(x) for x ≥ 0.
pub fn sine_integral(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(CasimirError::domain(format!("Si requires x >= 0, got {x}")));
    }
    if x <= 4.0 {
        return Ok(sine_integral_series(x));
    }
    Ok(FRAC_PI_2 - sine_integral_complement(x)?)
}

/// π/2 - Si(x), evaluated without cancellation for large x.
///
/// Uses the auxiliary functions
/// `f(x) = ∫₀^∞ e^{-xt}/(1+t²) dt` and `g(x) = ∫₀^∞ t e^{-xt}/(1+t²) dt`,
/// with `π/2 - Si(x) = f(x) cos x + g(x) sin x`.
pub fn sine_integral_complement(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(CasimirError::domain(format!("Si requires x >= 0, got {x}")));
    }
    if x <= 4.0 {
        return Ok(FRAC_PI_2 - sine_integral_series(x));
    }
    let spec = QuadratureSpec::default().with_relative_tolerance(1e-13);
    let inv = 1.0 / x;
    // Substituting u = x t gives exp(-u) decay.
    let f = integrate_semiinfinite(|u| (-u).exp() / (1.0 + (u * inv).powi(2)), 0.0, &spec)?.value * inv;
    let g = integrate_semiinfinite(|u| u * (-u).exp() / (1.0 + (u * inv).powi(2)), 0.0, &spec)?.value * inv * inv;
    Ok(f * x.cos() + g * x.sin())
}

fn sine_integral_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..40 {
        let n = (2 * k + 1) as f64;
        term *= -x2 / ((n - 1.0) * n);
        let add = term / n;
        sum += add;
        if add.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// E1(z) = e^{-z} ∫₀^∞ e^{-zu}/(1+u) du, evaluated by quadrature.
    fn e1_by_quadrature(z: f64) -> f64 {
        let spec = QuadratureSpec::default().with_relative_tolerance(1e-13);
        // Substitute v = z u so the integrand decays like e^{-v}.
        integrate_semiinfinite(|v| (-v).exp() / (z + v), 0.0, &spec)
            .unwrap()
            .value
            * (-z).exp()
    }

    #[test]
    fn ei_reference_values() {
        assert_relative_eq!(
            exp_integral_ei(-1.0).unwrap(),
            -0.219_383_934_395_520_3,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            exp_integral_ei(-10.0).unwrap(),
            -4.156_968_929_685_324e-6,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            exp_integral_ei(-0.01).unwrap(),
            -4.037_929_576_538_114,
            max_relative = 1e-14
        );
    }

    #[test]
    fn ei_matches_quadrature_across_switch_point() {
        for &z in &[0.05, 0.5, 0.99, 1.0, 1.01, 1.5, 3.0, 12.0, 30.0, 100.0] {
            let ei = exp_integral_ei(-z).unwrap();
            assert_relative_eq!(ei, -e1_by_quadrature(z), max_relative = 1e-12);
        }
    }

    #[test]
    fn ei_limits_and_domain() {
        assert!(exp_integral_ei(-800.0).unwrap() == 0.0);
        let v = exp_integral_ei(-500.0).unwrap();
        assert!(v < 0.0 && v > -1e-200);
        assert!(exp_integral_ei(0.0).is_err());
        assert!(exp_integral_ei(2.0).is_err());
        assert!(exp_integral_ei(f64::NAN).is_err());
    }

    #[test]
    fn ei_power_sum_matches_brute_force() {
        for &(p, tau) in &[(2u32, 1.0), (4, 0.5), (2, 0.05), (4, 0.05)] {
            let mut brute = 0.0;
            for l in (1..=10_000).rev() {
                let lf = l as f64;
                brute += lf.powi(p as i32) * exp_integral_ei(-2.0 * tau * lf).unwrap();
            }
            let s = ei_power_sum(p, tau, &SeriesSpec::default()).unwrap();
            assert_relative_eq!(s, brute, max_relative = 1e-10);
            assert!(s < 0.0);
        }
    }

    #[test]
    fn ei_power_sum_vanishes_for_large_tau() {
        let s = ei_power_sum(4, 200.0, &SeriesSpec::default()).unwrap();
        assert!(s < 0.0 && s > -1e-170);
        assert!(ei_power_sum(3, 1.0, &SeriesSpec::default()).is_err());
        assert!(ei_power_sum(2, 0.0, &SeriesSpec::default()).is_err());
    }

    #[test]
    fn ei_power_sum_reports_truncation() {
        let spec = SeriesSpec {
            tail_tolerance: 1e-12,
            max_terms: 10,
        };
        assert!(matches!(
            ei_power_sum(4, 1e-3, &spec),
            Err(CasimirError::ToleranceNotMet { .. })
        ));
    }

    #[test]
    fn zeta3_bracketed_by_partial_sum() {
        let mut s = 0.0;
        for n in (1..=1_000_000u64).rev() {
            s += 1.0 / (n as f64).powi(3);
        }
        // The tail beyond N is 1/(2N²) up to O(N⁻³).
        assert!(s < ZETA3);
        assert!((ZETA3 - s - 5e-13).abs() < 1e-15);
        assert_relative_eq!(ZETA3 / std::f64::consts::PI.powi(2), 0.121_793, max_relative = 1e-5);
    }

    #[test]
    fn sine_integral_values() {
        assert_relative_eq!(
            sine_integral(1.0).unwrap(),
            0.946_083_070_367_183_0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            sine_integral(5.0).unwrap(),
            1.549_931_244_944_674_1,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            sine_integral(20.0).unwrap(),
            1.548_241_701_043_439_8,
            max_relative = 1e-12
        );
        // Continuity across the series/integral switch.
        let below = sine_integral_series(4.0);
        let above = FRAC_PI_2 - {
            let x: f64 = 4.0 + 1e-12;
            sine_integral_complement(x).unwrap()
        };
        assert_relative_eq!(below, above, max_relative = 1e-12);
    }
}
