//! Dispersion relation mapping absorption Im ε(ω) on the real axis to ε(iξ).

use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::numerics::{integrate_finite, integrate_semiinfinite, QuadratureSpec};

/// Absorption spectrum on the real frequency axis.
pub trait AbsorptionSpectrum {
    /// Im ε(ω) for ω > 0. Must be non-negative.
    fn im_eps(&self, omega: f64) -> f64;

    /// Frequencies at which the spectrum has kinks or sharp features, in
    /// increasing order. The integration is split at these points.
    fn knots(&self) -> Vec<f64>;
}

/// A closure with user-supplied feature frequencies.
pub struct AnalyticSpectrum<F> {
    im_eps: F,
    knots: Vec<f64>,
}

impl<F: Fn(f64) -> f64> AnalyticSpectrum<F> {
    pub fn new(im_eps: F, mut knots: Vec<f64>) -> Self {
        knots.retain(|k| *k > 0.0 && k.is_finite());
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        AnalyticSpectrum { im_eps, knots }
    }
}

impl<F: Fn(f64) -> f64> AbsorptionSpectrum for AnalyticSpectrum<F> {
    fn im_eps(&self, omega: f64) -> f64 {
        (self.im_eps)(omega)
    }

    fn knots(&self) -> Vec<f64> {
        self.knots.clone()
    }
}

/// `(2/π) ∫₀^∞ ω Im ε(ω)/(ω²+ξ²) dω`, i.e. ε(iξ) − 1.
///
/// Between consecutive knots the integral is taken in ln ω; below the first
/// knot in ω itself; above the last knot in ln ω out to infinity.
pub fn kramers_kronig_excess<S: AbsorptionSpectrum + ?Sized>(
    spectrum: &S,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(CasimirError::domain(format!(
            "dispersion relation needs xi > 0, got {xi}"
        )));
    }
    let mut knots = spectrum.knots();
    if knots.is_empty() {
        knots.push(xi);
    }
    if !knots.contains(&xi) {
        knots.push(xi);
        knots.sort_by(f64::total_cmp);
    }
    let xi2 = xi * xi;
    let in_log = |s: f64| {
        let w = s.exp();
        let v = spectrum.im_eps(w) / (1.0 + (xi / w).powi(2));
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let first = knots[0];
    let mut total = integrate_finite(|w| w * spectrum.im_eps(w) / (w * w + xi2), 0.0, first, spec)?.value;
    for pair in knots.windows(2) {
        total += integrate_finite(in_log, pair[0].ln(), pair[1].ln(), spec)?.value;
    }
    let last = knots[knots.len() - 1].ln();
    total += integrate_semiinfinite(|s| in_log(last + s), 0.0, spec)?.value;
    Ok(2.0 / PI * total)
}

/// ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω)/(ω²+ξ²) dω.
pub fn kramers_kronig<S: AbsorptionSpectrum + ?Sized>(spectrum: &S, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 + kramers_kronig_excess(spectrum, xi, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_xis() -> Vec<f64> {
        (0..20).map(|k| 1e12 * 10f64.powf(k as f64 * 0.25)).collect()
    }

    #[test]
    fn vacuum_is_one() {
        let s = AnalyticSpectrum::new(|_| 0.0, vec![1e14, 1e16]);
        for xi in sample_xis() {
            assert_eq!(kramers_kronig(&s, xi, &QuadratureSpec::default()).unwrap(), 1.0);
        }
    }

    #[test]
    fn lorentz_oscillator_pair() {
        // Im ε = f γ ω / ((ω₀²−ω²)² + γ²ω²)  ↔  ε(iξ) = 1 + f/(ω₀² + γξ + ξ²)
        let (f, w0, g) = (4.0e31, 3.0e15, 2.0e14);
        let s = AnalyticSpectrum::new(
            move |w: f64| f * g * w / ((w0 * w0 - w * w).powi(2) + g * g * w * w),
            vec![w0 - 5.0 * g, w0, w0 + 5.0 * g],
        );
        for xi in sample_xis() {
            let got = kramers_kronig(&s, xi, &QuadratureSpec::default()).unwrap();
            let want = 1.0 + f / (w0 * w0 + g * xi + xi * xi);
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn drude_pair() {
        let (wp, g) = (1.37e16, 5.3e13);
        let s = AnalyticSpectrum::new(move |w: f64| wp * wp * g / (w * (w * w + g * g)), vec![g]);
        for xi in sample_xis() {
            let got = kramers_kronig(&s, xi, &QuadratureSpec::default()).unwrap();
            let want = 1.0 + wp * wp / (xi * (xi + g));
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn result_is_at_least_one_and_decreasing() {
        let s = AnalyticSpectrum::new(|w: f64| (-(w.ln() - 35.0).powi(2)).exp(), vec![1e15, 1.6e15, 3e15]);
        let mut prev = f64::INFINITY;
        for xi in sample_xis() {
            let e = kramers_kronig(&s, xi, &QuadratureSpec::default()).unwrap();
            assert!(e >= 1.0);
            assert!(e <= prev);
            prev = e;
        }
    }

    #[test]
    fn rejects_zero_frequency() {
        let s = AnalyticSpectrum::new(|_| 0.0, vec![]);
        assert!(kramers_kronig(&s, 0.0, &QuadratureSpec::default()).is_err());
    }
}
