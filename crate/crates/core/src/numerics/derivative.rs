//! Five-point central differences with one Richardson refinement.

use crate::error::Result;

/// Relative error above which a derivative is flagged as low confidence.
pub const LOW_CONFIDENCE_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    /// Refinement difference plus a round-off allowance.
    pub error: f64,
    pub low_confidence: bool,
}

/// Step used for a characteristic magnitude `scale`: `scale * eps^(1/5)`.
pub fn step_for_scale(scale: f64) -> f64 {
    scale * f64::EPSILON.powf(0.2)
}

/// Estimates `f'(x)`, taking the step from the characteristic `scale` of `x`.
pub fn central_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, scale: f64) -> Derivative {
    try_central_derivative(|t| Ok(f(t)), x, scale).expect("infallible")
}

/// As [`central_derivative`] for fallible functions; the first error aborts.
pub fn try_central_derivative<F>(mut f: F, x: f64, scale: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = step_for_scale(scale.abs());
    let mut v = [0.0; 6];
    // x-4h, x-2h, x-h, x+h, x+2h, x+4h
    for (slot, k) in v.iter_mut().zip([-4.0, -2.0, -1.0, 1.0, 2.0, 4.0]) {
        *slot = f(x + k * h)?;
    }
    let d_h = (v[1] - 8.0 * v[2] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let d_2h = (v[0] - 8.0 * v[1] + 8.0 * v[4] - v[5]) / (24.0 * h);
    let value = d_h + (d_h - d_2h) / 15.0;
    let magnitude = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let roundoff = 2.0 * f64::EPSILON * magnitude / h;
    let error = (d_h - d_2h).abs() / 15.0 + roundoff;
    Ok(Derivative {
        value,
        error,
        low_confidence: error > LOW_CONFIDENCE_THRESHOLD * value.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic() {
        let d = central_derivative(|x| x * x, 3.0, 3.0);
        assert_abs_diff_eq!(d.value, 6.0, epsilon = 1e-10);
        assert!(!d.low_confidence);
    }

    #[test]
    fn exponential() {
        let d = central_derivative(f64::exp, 0.0, 1.0);
        assert_abs_diff_eq!(d.value, 1.0, epsilon = 1e-9);
        assert!(d.error < 1e-9);
    }

    #[test]
    fn noisy_function_is_flagged() {
        let mut k = 0u32;
        let d = central_derivative(
            |x| {
                k += 1;
                x + if k.is_multiple_of(2) { 1e-3 } else { -1e-3 }
            },
            1.0,
            1.0,
        );
        assert!(d.low_confidence);
    }

    #[test]
    fn error_propagates() {
        let r = try_central_derivative(
            |x| {
                if x > 1.0 {
                    Err(crate::CasimirError::domain("boom"))
                } else {
                    Ok(x)
                }
            },
            1.0,
            1.0,
        );
        assert!(r.is_err());
    }
}
