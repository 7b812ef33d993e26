//! Quantities with explicit unit suffixes. Everything is converted to SI.

use casimir_core::{CasimirError, Result, SweepAxis};

const LENGTH_UNITS: [(&str, i32); 4] = [("nm", -9), ("µm", -6), ("um", -6), ("m", 0)];

fn split_suffix<'a>(text: &'a str, suffix: &str) -> Option<&'a str> {
    text.strip_suffix(suffix).map(str::trim_end)
}

fn number(text: &str, whole: &str) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| CasimirError::Config(format!("cannot read a number from '{whole}'")))?;
    if !v.is_finite() {
        return Err(CasimirError::Config(format!("'{whole}' is not finite")));
    }
    Ok(v)
}

/// Reads `text` times 10^exp, rounding the decimal value once.
fn scaled(text: &str, exp: i32, whole: &str) -> Result<f64> {
    let v = number(text, whole)?;
    if exp == 0 || text.contains(['e', 'E']) {
        return Ok(v * 10f64.powi(exp));
    }
    number(&format!("{text}e{exp}"), whole)
}

/// `600nm`, `0.6 um`, `0.6µm` or `6e-7m`, in metres.
pub fn parse_length(text: &str) -> Result<f64> {
    let t = text.trim();
    for (suffix, exp) in LENGTH_UNITS {
        if let Some(n) = split_suffix(t, suffix) {
            return scaled(n, exp, text);
        }
    }
    Err(CasimirError::Config(format!(
        "separation '{text}' needs a unit suffix: nm, um, µm or m"
    )))
}

/// `300K` or `300 K`, in kelvin.
pub fn parse_temperature(text: &str) -> Result<f64> {
    let t = text.trim();
    match split_suffix(t, "K") {
        Some(n) => number(n, text),
        None => Err(CasimirError::Config(format!("temperature '{text}' needs the suffix K"))),
    }
}

pub fn parse_along(axis: SweepAxis, text: &str) -> Result<f64> {
    match axis {
        SweepAxis::Temperature => parse_temperature(text),
        SweepAxis::Separation => parse_length(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(parse_length("600nm").unwrap(), 6e-7);
        assert_eq!(parse_length("6e2 nm").unwrap(), 600.0 * 1e-9);
        assert_eq!(parse_length("0.6 um").unwrap(), 0.6e-6);
        assert_eq!(parse_length("0.6µm").unwrap(), 0.6e-6);
        assert_eq!(parse_length("6e-7m").unwrap(), 6e-7);
        assert!(parse_length("600").is_err());
        assert!(parse_length("600 mm").is_err());
        assert!(parse_length("nm").is_err());
    }

    #[test]
    fn temperatures() {
        assert_eq!(parse_temperature("300K").unwrap(), 300.0);
        assert_eq!(parse_temperature(" 0 K").unwrap(), 0.0);
        assert!(parse_temperature("300").is_err());
        assert!(parse_temperature("infK").is_err());
    }
}
