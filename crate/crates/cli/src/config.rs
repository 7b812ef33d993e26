//! Sweep configuration: a TOML file, command-line overrides, or both.
//!
//! ```toml
//! metal = "ideal-metal"
//! dielectric = "alumina"
//! axis = "separation"
//! range = ["0.2um", "1.4um"]
//! steps = 25
//! fixed = "300K"
//! output = "alumina.csv"
//! entropy_ev = false
//!
//! [tolerances]
//! matsubara_tail_tol = 1e-10
//! quadrature = { relative_tolerance = 1e-10 }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use casimir_core::{CasimirError, PlateConfig, Result, SolverSettings, SweepAxis, SweepSpec};

use crate::units::{parse_along, parse_length, parse_temperature};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigDoc {
    pub metal: Option<String>,
    pub dielectric: Option<String>,
    pub axis: Option<SweepAxis>,
    pub range: Option<[String; 2]>,
    pub steps: Option<usize>,
    pub fixed: Option<String>,
    pub output: Option<PathBuf>,
    pub entropy_ev: Option<bool>,
    pub tolerances: Option<SolverSettings>,
}

impl RunConfigDoc {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CasimirError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| CasimirError::Load {
            path: path.to_path_buf(),
            row: 0,
            reason: e.message().to_string(),
        })
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: RunConfigDoc) -> RunConfigDoc {
        RunConfigDoc {
            metal: over.metal.or(self.metal),
            dielectric: over.dielectric.or(self.dielectric),
            axis: over.axis.or(self.axis),
            range: over.range.or(self.range),
            steps: over.steps.or(self.steps),
            fixed: over.fixed.or(self.fixed),
            output: over.output.or(self.output),
            entropy_ev: over.entropy_ev.or(self.entropy_ev),
            tolerances: over.tolerances.or(self.tolerances),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub metal: String,
    pub dielectric: String,
    pub sweep: SweepSpec,
    pub template: PlateConfig,
    pub output: Option<PathBuf>,
    pub entropy_ev: bool,
    pub tolerances: SolverSettings,
}

fn missing(field: &str) -> CasimirError {
    CasimirError::Config(format!("sweep configuration is missing '{field}'"))
}

impl TryFrom<RunConfigDoc> for RunConfig {
    type Error = CasimirError;

    fn try_from(doc: RunConfigDoc) -> Result<Self> {
        let axis = doc.axis.ok_or_else(|| missing("axis"))?;
        let [lo, hi] = doc.range.ok_or_else(|| missing("range"))?;
        let (start, stop) = (parse_along(axis, &lo)?, parse_along(axis, &hi)?);
        if start >= stop {
            return Err(CasimirError::Config(format!("range needs min < max, got [{lo}, {hi}]")));
        }
        let sweep = SweepSpec {
            axis,
            start,
            stop,
            steps: doc.steps.ok_or_else(|| missing("steps"))?,
        };
        sweep.validate()?;
        let fixed = doc.fixed.ok_or_else(|| missing("fixed"))?;
        let template = match axis {
            SweepAxis::Temperature => PlateConfig::new(parse_length(&fixed)?, start)?,
            SweepAxis::Separation => PlateConfig::new(start, parse_temperature(&fixed)?)?,
        };
        let tolerances = doc.tolerances.unwrap_or_default();
        tolerances.validate()?;
        Ok(RunConfig {
            metal: doc.metal.unwrap_or_else(|| "ideal-metal".to_string()),
            dielectric: doc.dielectric.ok_or_else(|| missing("dielectric"))?,
            sweep,
            template,
            output: doc.output,
            entropy_ev: doc.entropy_ev.unwrap_or(false),
            tolerances,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> RunConfigDoc {
        toml::from_str(text).unwrap()
    }

    const FIG: &str = r#"
        dielectric = "const:7"
        axis = "temperature"
        range = ["0K", "600K"]
        steps = 7
        fixed = "600nm"
    "#;

    #[test]
    fn reads_a_temperature_sweep() {
        let cfg = RunConfig::try_from(doc(FIG)).unwrap();
        assert_eq!(cfg.metal, "ideal-metal");
        assert_eq!(cfg.sweep.values(), vec![0.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0]);
        assert_eq!(cfg.template.separation, 600e-9);
        assert_eq!(cfg.tolerances, SolverSettings::default());
    }

    #[test]
    fn overrides_win() {
        let over = RunConfigDoc {
            steps: Some(2),
            ..RunConfigDoc::default()
        };
        let cfg = RunConfig::try_from(doc(FIG).merge(over)).unwrap();
        assert_eq!(cfg.sweep.steps, 2);
    }

    #[test]
    fn tolerances_are_partial() {
        let d = doc(&format!(
            "{FIG}\n[tolerances]\nquadrature = {{ relative_tolerance = 1e-8 }}\n"
        ));
        let cfg = RunConfig::try_from(d).unwrap();
        assert_eq!(cfg.tolerances.quadrature.relative_tolerance, 1e-8);
        assert_eq!(cfg.tolerances.matsubara_tail_tol, 1e-10);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            FIG.replace("[\"0K\", \"600K\"]", "[\"600K\", \"0K\"]"),
            FIG.replace("steps = 7", "steps = 1"),
            FIG.replace("600nm", "600"),
            FIG.replace("axis = \"temperature\"", ""),
        ];
        for text in bad {
            assert!(
                matches!(RunConfig::try_from(doc(&text)), Err(CasimirError::Config(_))),
                "{text}"
            );
        }
        assert!(toml::from_str::<RunConfigDoc>("colour = 3").is_err());
    }
}
