//! TM and TE reflection coefficients at imaginary frequencies.

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::permittivity::Permittivity;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionPair {
    /// Transverse magnetic.
    pub r_par: f64,
    /// Transverse electric.
    pub r_perp: f64,
}

impl ReflectionPair {
    pub const PERFECT: ReflectionPair = ReflectionPair {
        r_par: 1.0,
        r_perp: 1.0,
    };
    pub const NONE: ReflectionPair = ReflectionPair {
        r_par: 0.0,
        r_perp: 0.0,
    };
}

/// Reflection coefficients for a half-space with permittivity `eps` at
/// dimensionless frequency `zeta` and wave-vector variable `y ≥ zeta`.
///
/// Written as
/// `r_⊥ = ζ²(ε−1)/(s+y)²` and `r_∥ = (ε−1)((ε+1)y² − ζ²)/(εy+s)²`
/// with `s = √(y² + ζ²(ε−1))`, which stays accurate as ε → 1.
pub fn reflection_coeffs(eps: Permittivity, zeta: f64, y: f64) -> Result<ReflectionPair> {
    if !(zeta >= 0.0) || !(y >= zeta) || !y.is_finite() {
        return Err(CasimirError::domain(format!(
            "reflection needs 0 <= zeta <= y, got zeta = {zeta}, y = {y}"
        )));
    }
    let e = match eps {
        Permittivity::Infinite => return Ok(ReflectionPair::PERFECT),
        Permittivity::Finite(e) if e >= 1.0 => e,
        Permittivity::Finite(e) => {
            return Err(CasimirError::domain(format!("permittivity must be >= 1, got {e}")));
        }
    };
    let em1 = e - 1.0;
    if zeta == 0.0 {
        return Ok(ReflectionPair {
            r_par: em1 / (e + 1.0),
            r_perp: 0.0,
        });
    }
    let z2 = zeta * zeta;
    let s = (y * y + z2 * em1).sqrt();
    let r_perp = z2 * em1 / (s + y).powi(2);
    let r_par = em1 * ((e + 1.0) * y * y - z2) / (e * y + s).powi(2);
    Ok(ReflectionPair { r_par, r_perp })
}

/// `ln(1 − r∥ᴹ r∥ᴰ e^{−y}) + ln(1 − r⊥ᴹ r⊥ᴰ e^{−y})`.
pub fn log_kernel(metal: ReflectionPair, dielectric: ReflectionPair, y: f64) -> f64 {
    let ey = (-y).exp();
    (-metal.r_par * dielectric.r_par * ey).ln_1p() + (-metal.r_perp * dielectric.r_perp * ey).ln_1p()
}
