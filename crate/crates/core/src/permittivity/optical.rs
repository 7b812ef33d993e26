//! Tabulated optical constants `(ω, n₁, n₂)` and their CSV representation.
//!
//! Files carry a header naming the frequency column (`omega` in rad/s,
//! `freq_hz`, or `energy_ev`) followed by `n1,n2`. Lines starting with `#`
//! are comments; a `# source: ...` comment sets the provenance label.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{ELECTRON_VOLT, HBAR};
use crate::error::{CasimirError, Result};

pub const MIN_ROWS: usize = 8;
/// Minimum ratio ω_max / ω_min (two decades).
pub const MIN_SPAN: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrequencyUnit {
    RadPerSecond,
    Hertz,
    ElectronVolt,
}

impl FrequencyUnit {
    pub fn to_rad_per_second(self, value: f64) -> f64 {
        match self {
            FrequencyUnit::RadPerSecond => value,
            FrequencyUnit::Hertz => 2.0 * std::f64::consts::PI * value,
            FrequencyUnit::ElectronVolt => value * ELECTRON_VOLT / HBAR,
        }
    }

    fn from_header(name: &str) -> Option<Self> {
        match name {
            "omega" => Some(FrequencyUnit::RadPerSecond),
            "freq_hz" => Some(FrequencyUnit::Hertz),
            "energy_ev" => Some(FrequencyUnit::ElectronVolt),
            _ => None,
        }
    }
}

impl FromStr for FrequencyUnit {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rad/s" | "rad-per-second" | "omega" => Ok(FrequencyUnit::RadPerSecond),
            "hz" | "Hz" | "hertz" => Ok(FrequencyUnit::Hertz),
            "ev" | "eV" | "electron-volt" => Ok(FrequencyUnit::ElectronVolt),
            other => Err(CasimirError::Config(format!("unknown frequency unit '{other}'"))),
        }
    }
}

impl fmt::Display for FrequencyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrequencyUnit::RadPerSecond => "rad/s",
            FrequencyUnit::Hertz => "Hz",
            FrequencyUnit::ElectronVolt => "eV",
        })
    }
}

/// One row of optical constants at angular frequency `omega` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalSample {
    pub omega: f64,
    pub n1: f64,
    pub n2: f64,
}

impl OpticalSample {
    pub fn im_eps(&self) -> f64 {
        2.0 * self.n1 * self.n2
    }
}

/// Imaginary part of the permittivity from the complex refractive index.
pub fn im_eps_from_nk(n1: f64, n2: f64) -> Result<f64> {
    if !(n1 >= 0.0) || !(n2 >= 0.0) {
        return Err(CasimirError::domain(format!(
            "refractive index components must be non-negative, got ({n1}, {n2})"
        )));
    }
    Ok(2.0 * n1 * n2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataset {
    rows: Vec<OpticalSample>,
    pub provenance: String,
}

impl OpticalDataset {
    pub fn new(rows: Vec<OpticalSample>, provenance: impl Into<String>) -> Result<Self> {
        let provenance = provenance.into();
        validate_rows(&rows).map_err(|(row, reason)| CasimirError::Load {
            path: provenance.clone().into(),
            row,
            reason,
        })?;
        Ok(OpticalDataset { rows, provenance })
    }

    pub fn rows(&self) -> &[OpticalSample] {
        &self.rows
    }

    pub fn omega_min(&self) -> f64 {
        self.rows[0].omega
    }

    pub fn omega_max(&self) -> f64 {
        self.rows[self.rows.len() - 1].omega
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        if !self.provenance.is_empty() {
            for line in self.provenance.lines() {
                out.push_str("# source: ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str("omega,n1,n2\n");
        for r in &self.rows {
            // `Display` for f64 is the shortest string that round-trips.
            out.push_str(&format!("{},{},{}\n", r.omega, r.n1, r.n2));
        }
        fs::write(path, out).map_err(|e| CasimirError::io(path, e))
    }
}

/// Returns the 1-based data row index and reason of the first violation.
fn validate_rows(rows: &[OpticalSample]) -> std::result::Result<(), (usize, String)> {
    for (i, r) in rows.iter().enumerate() {
        if !(r.omega > 0.0) || !r.omega.is_finite() {
            return Err((i + 1, format!("frequency {} must be positive", r.omega)));
        }
        if !(r.n1 > 0.0) || !r.n1.is_finite() {
            return Err((i + 1, format!("n1 = {} must be positive", r.n1)));
        }
        if !(r.n2 >= 0.0) || !r.n2.is_finite() {
            return Err((i + 1, format!("n2 = {} must be non-negative", r.n2)));
        }
        if i > 0 && !(r.omega > rows[i - 1].omega) {
            return Err((i + 1, "frequency column is not strictly increasing".to_string()));
        }
    }
    if rows.len() < MIN_ROWS {
        return Err((
            rows.len(),
            format!("need at least {MIN_ROWS} rows, found {}", rows.len()),
        ));
    }
    let span = rows[rows.len() - 1].omega / rows[0].omega;
    if span < MIN_SPAN {
        return Err((rows.len(), format!("frequency range spans only a factor {span:.3}")));
    }
    Ok(())
}

/// Reads an optical-constants CSV. `unit` overrides the unit implied by the
/// frequency column header.
pub fn load_optical_csv(path: impl AsRef<Path>, unit: Option<FrequencyUnit>) -> Result<OpticalDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CasimirError::io(path, e))?;
    let load_err = |row: usize, reason: String| CasimirError::Load {
        path: path.to_path_buf(),
        row,
        reason,
    };

    let mut provenance = Vec::new();
    for line in text.lines() {
        if let Some(src) = line.trim_start().strip_prefix("# source:") {
            provenance.push(src.trim().to_string());
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| load_err(0, format!("bad header: {e}")))?
        .clone();
    if headers.len() != 3 || &headers[1] != "n1" || &headers[2] != "n2" {
        return Err(load_err(
            0,
            format!(
                "expected header '<frequency>,n1,n2', got '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let header_unit = FrequencyUnit::from_header(&headers[0])
        .ok_or_else(|| load_err(0, format!("unknown frequency column '{}'", &headers[0])))?;
    let unit = unit.unwrap_or(header_unit);

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| load_err(row, e.to_string()))?;
        if record.len() != 3 {
            return Err(load_err(row, format!("expected 3 columns, found {}", record.len())));
        }
        let mut vals = [0.0; 3];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = record[k]
                .parse::<f64>()
                .map_err(|_| load_err(row, format!("cannot parse '{}' as a number", &record[k])))?;
        }
        rows.push(OpticalSample {
            omega: unit.to_rad_per_second(vals[0]),
            n1: vals[1],
            n2: vals[2],
        });
    }
    validate_rows(&rows).map_err(|(row, reason)| load_err(row, reason))?;
    Ok(OpticalDataset {
        rows,
        provenance: provenance.join("\n"),
    })
}
