//! Named materials and an on-disk store for user definitions.
//!
//! Built-in names: `alumina`, `si-fallback`, `au-drude`, `ideal-metal` and
//! `vacuum`. The forms `const:<eps>` and `dilute:<eta>` build ad-hoc models.
//!
//! A store is a directory of `<name>.material` TOML documents:
//!
//! ```toml
//! name = "au-palik"
//! source = "Palik handbook, digitised"
//! static_eps = "infinite"
//!
//! [model]
//! kind = "tabulated"
//! data = "au-palik.csv"
//! drude = { plasma_frequency = 1.37e16, damping = 5.3e13 }
//! ```
//!
//! `kind` is one of `ideal-metal`, `constant` (`eps`), `dilute` (`eta`),
//! `ninham-parsegian` (`c_ir`, `omega_ir`, `c_uv`, `omega_uv`), `drude`
//! (`plasma_frequency`, `damping`) or `tabulated`. Tabulated data paths are
//! relative to the store directory.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::permittivity::{
    load_optical_csv, DrudeParams, FrequencyUnit, NinhamParsegian, Permittivity, PermittivityModel,
};

pub const BUILTIN_NAMES: [&str; 5] = ["alumina", "si-fallback", "au-drude", "ideal-metal", "vacuum"];

const EXTENSION: &str = "material";

/// Static permittivity, finite or that of a conductor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticEps {
    Finite(f64),
    Infinite,
}

impl fmt::Display for StaticEps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StaticEps::Finite(e) => write!(f, "{e}"),
            StaticEps::Infinite => f.write_str("infinite"),
        }
    }
}

impl FromStr for StaticEps {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("infinite") {
            return Ok(StaticEps::Infinite);
        }
        s.trim()
            .parse()
            .map(StaticEps::Finite)
            .map_err(|_| CasimirError::Config(format!("static_eps must be a number or 'infinite', got '{s}'")))
    }
}

impl From<Permittivity> for StaticEps {
    fn from(p: Permittivity) -> Self {
        match p {
            Permittivity::Finite(e) => StaticEps::Finite(e),
            Permittivity::Infinite => StaticEps::Infinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub model: PermittivityModel,
    /// Where the parameters or data come from.
    pub source: String,
    pub static_eps: StaticEps,
}

impl MaterialRecord {
    /// Builds a record, computing `static_eps` from the model.
    pub fn new(name: impl Into<String>, model: PermittivityModel, source: impl Into<String>) -> Result<Self> {
        model.validate()?;
        let static_eps = model.eval_epsilon(0.0)?.into();
        Ok(MaterialRecord {
            name: name.into(),
            model,
            source: source.into(),
            static_eps,
        })
    }
}

pub fn builtin_material(name: &str) -> Result<MaterialRecord> {
    let (model, source) = match name {
        "alumina" => (
            PermittivityModel::ninham_parsegian(7.03, 1e14, 2.072, 2e16)?,
            "alpha-Al2O3, Ninham-Parsegian oscillators C_IR = 7.03, omega_IR = 1e14 rad/s, C_UV = 2.072, omega_UV = 2e16 rad/s",
        ),
        "si-fallback" => (
            PermittivityModel::ninham_parsegian(0.0, 1e14, 10.66, 6.6e15)?,
            "Si, approximate single UV oscillator with static value 11.66 and omega_Si = 6.6e15 rad/s; \
             replace with tabulated data for quantitative work",
        ),
        "au-drude" => (
            PermittivityModel::Drude(DrudeParams::GOLD),
            "Au, Drude model with omega_p = 1.37e16 rad/s, gamma = 5.3e13 rad/s",
        ),
        "ideal-metal" => (PermittivityModel::IdealMetal, "perfect reflector"),
        "vacuum" => (PermittivityModel::Constant(1.0), "empty space"),
        _ => return Err(CasimirError::UnknownMaterial(name.to_string())),
    };
    MaterialRecord::new(name, model, source)
}

/// Parses `const:<eps>` or `dilute:<eta>`.
fn adhoc_material(name: &str) -> Option<Result<MaterialRecord>> {
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| CasimirError::Config(format!("bad number in material '{name}'")))
    };
    if let Some(v) = name.strip_prefix("const:") {
        return Some(
            parse(v)
                .and_then(PermittivityModel::constant)
                .and_then(|m| MaterialRecord::new(name, m, "frequency-independent permittivity")),
        );
    }
    if let Some(v) = name.strip_prefix("dilute:") {
        return Some(
            parse(v)
                .and_then(PermittivityModel::dilute)
                .and_then(|m| MaterialRecord::new(name, m, "dilute dielectric, eps = 1 + eta")),
        );
    }
    None
}

/// Looks a name up among built-ins, ad-hoc forms and then the store.
pub fn resolve_material(name: &str, store: Option<&MaterialStore>) -> Result<MaterialRecord> {
    if let Some(r) = adhoc_material(name) {
        return r;
    }
    match builtin_material(name) {
        Err(CasimirError::UnknownMaterial(_)) => {}
        other => return other,
    }
    match store {
        Some(s) => s.get(name),
        None => Err(CasimirError::UnknownMaterial(name.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ModelDoc {
    IdealMetal,
    Constant {
        eps: f64,
    },
    Dilute {
        eta: f64,
    },
    NinhamParsegian {
        c_ir: f64,
        omega_ir: f64,
        c_uv: f64,
        omega_uv: f64,
    },
    Drude {
        plasma_frequency: f64,
        damping: f64,
    },
    Tabulated {
        data: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        drude: Option<DrudeParams>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialDoc {
    name: String,
    #[serde(default)]
    source: String,
    static_eps: String,
    model: ModelDoc,
}

/// Directory of material documents. Writes through one store value are
/// serialized; files are created exclusively so concurrent writers from
/// other processes cannot overwrite each other.
#[derive(Debug)]
pub struct MaterialStore {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !name.starts_with('.');
    if !ok {
        return Err(CasimirError::Config(format!(
            "material names use letters, digits, '-', '_' and '.', got '{name}'"
        )));
    }
    Ok(())
}

impl MaterialStore {
    /// Opens a store, creating the directory if needed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CasimirError::io(&dir, e))?;
        Ok(MaterialStore {
            dir,
            write_lock: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.{EXTENSION}"))
    }

    /// Names of all stored materials, sorted.
    pub fn list(&self) -> Result<Vec<String>> {
        let entries = fs::read_dir(&self.dir).map_err(|e| CasimirError::io(&self.dir, e))?;
        let mut names = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| CasimirError::io(&self.dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) == Some(EXTENSION) {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    names.push(stem.to_string());
                }
            }
        }
        names.sort();
        Ok(names)
    }

    pub fn get(&self, name: &str) -> Result<MaterialRecord> {
        check_name(name)?;
        let path = self.path_for(name);
        if !path.exists() {
            return Err(CasimirError::UnknownMaterial(name.to_string()));
        }
        let text = fs::read_to_string(&path).map_err(|e| CasimirError::io(&path, e))?;
        let bad = |reason: String| CasimirError::Load {
            path: path.clone(),
            row: 0,
            reason,
        };
        let doc: MaterialDoc = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        if doc.name != name {
            return Err(bad(format!("file declares name '{}'", doc.name)));
        }
        let model = self.model_from_doc(&doc.model)?;
        let record = MaterialRecord::new(doc.name, model, doc.source)?;
        let declared: StaticEps = doc.static_eps.parse()?;
        let consistent = match (declared, record.static_eps) {
            (StaticEps::Infinite, StaticEps::Infinite) => true,
            (StaticEps::Finite(a), StaticEps::Finite(b)) => (a - b).abs() <= 1e-9 * b.abs(),
            _ => false,
        };
        if !consistent {
            return Err(bad(format!(
                "static_eps {declared} disagrees with the model value {}",
                record.static_eps
            )));
        }
        Ok(record)
    }

    fn model_from_doc(&self, doc: &ModelDoc) -> Result<PermittivityModel> {
        Ok(match doc {
            ModelDoc::IdealMetal => PermittivityModel::IdealMetal,
            ModelDoc::Constant { eps } => PermittivityModel::constant(*eps)?,
            ModelDoc::Dilute { eta } => PermittivityModel::dilute(*eta)?,
            ModelDoc::NinhamParsegian {
                c_ir,
                omega_ir,
                c_uv,
                omega_uv,
            } => PermittivityModel::ninham_parsegian(*c_ir, *omega_ir, *c_uv, *omega_uv)?,
            ModelDoc::Drude {
                plasma_frequency,
                damping,
            } => PermittivityModel::drude(*plasma_frequency, *damping)?,
            ModelDoc::Tabulated { data, unit, drude } => {
                let unit = unit.as_deref().map(FrequencyUnit::from_str).transpose()?;
                let dataset = load_optical_csv(self.dir.join(data), unit)?;
                PermittivityModel::tabulated(dataset, *drude)?
            }
        })
    }

    /// Persists a record. Tabulated data are written next to it as
    /// `<name>.csv`.
    pub fn register(&self, record: &MaterialRecord) -> Result<()> {
        check_name(&record.name)?;
        if BUILTIN_NAMES.contains(&record.name.as_str()) {
            return Err(CasimirError::DuplicateMaterial(record.name.clone()));
        }
        let _guard = self.write_lock.lock().unwrap_or_else(|p| p.into_inner());
        let path = self.path_for(&record.name);
        let model = match &record.model {
            PermittivityModel::IdealMetal => ModelDoc::IdealMetal,
            PermittivityModel::Constant(eps) => ModelDoc::Constant { eps: *eps },
            PermittivityModel::Dilute(eta) => ModelDoc::Dilute { eta: *eta },
            PermittivityModel::NinhamParsegian(NinhamParsegian {
                c_ir,
                omega_ir,
                c_uv,
                omega_uv,
            }) => ModelDoc::NinhamParsegian {
                c_ir: *c_ir,
                omega_ir: *omega_ir,
                c_uv: *c_uv,
                omega_uv: *omega_uv,
            },
            PermittivityModel::Drude(d) => ModelDoc::Drude {
                plasma_frequency: d.plasma_frequency,
                damping: d.damping,
            },
            PermittivityModel::Tabulated(t) => ModelDoc::Tabulated {
                data: format!("{}.csv", record.name),
                unit: None,
                drude: t.extrapolation().copied(),
            },
        };
        let doc = MaterialDoc {
            name: record.name.clone(),
            source: record.source.clone(),
            static_eps: record.static_eps.to_string(),
            model,
        };
        let text = toml::to_string(&doc).map_err(|e| CasimirError::Config(e.to_string()))?;

        let mut file = match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                return Err(CasimirError::DuplicateMaterial(record.name.clone()));
            }
            Err(e) => return Err(CasimirError::io(&path, e)),
        };
        let written = (|| {
            if let PermittivityModel::Tabulated(t) = &record.model {
                t.dataset().save_csv(self.dir.join(format!("{}.csv", record.name)))?;
            }
            file.write_all(text.as_bytes()).map_err(|e| CasimirError::io(&path, e))
        })();
        if written.is_err() {
            let _ = fs::remove_file(&path);
        }
        written
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permittivity::{OpticalDataset, OpticalSample};
    use approx::assert_relative_eq;

    fn eps(r: &MaterialRecord, xi: f64) -> f64 {
        r.model.eval_epsilon(xi).unwrap().finite().unwrap()
    }

    #[test]
    fn alumina_parameters() {
        let r = builtin_material("alumina").unwrap();
        assert_eq!(
            r.model,
            PermittivityModel::NinhamParsegian(NinhamParsegian {
                c_ir: 7.03,
                omega_ir: 1e14,
                c_uv: 2.072,
                omega_uv: 2e16
            })
        );
        assert_relative_eq!(eps(&r, 0.0), 10.102, max_relative = 1e-14);
        let ratio = eps(&r, 0.0) / eps(&r, 1e15);
        assert!((2.0..=6.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn silicon_fallback_is_flat_then_decays() {
        let r = builtin_material("si-fallback").unwrap();
        assert_eq!(r.static_eps, StaticEps::Finite(11.66));
        for k in 0..=30 {
            let xi = 1e12 * 10f64.powf(k as f64 * 0.1);
            assert!((eps(&r, xi) / 11.66 - 1.0).abs() <= 0.05, "xi = {xi}");
        }
        assert!(eps(&r, 1e18) < 1.01);
    }

    #[test]
    fn static_eps_matches_model() {
        for name in BUILTIN_NAMES {
            let r = builtin_material(name).unwrap();
            assert_eq!(r.static_eps, StaticEps::from(r.model.eval_epsilon(0.0).unwrap()));
        }
        assert_eq!(builtin_material("ideal-metal").unwrap().static_eps, StaticEps::Infinite);
        assert_eq!(builtin_material("au-drude").unwrap().static_eps, StaticEps::Infinite);
    }

    #[test]
    fn unknown_and_adhoc_names() {
        assert!(matches!(
            builtin_material("gold"),
            Err(CasimirError::UnknownMaterial(_))
        ));
        assert_eq!(
            resolve_material("const:7", None).unwrap().model,
            PermittivityModel::Constant(7.0)
        );
        assert_eq!(
            resolve_material("dilute:0.1", None).unwrap().model,
            PermittivityModel::Dilute(0.1)
        );
        assert!(resolve_material("const:x", None).is_err());
        assert!(resolve_material("dilute:0.5", None).is_err());
        assert!(matches!(
            resolve_material("nope", None),
            Err(CasimirError::UnknownMaterial(_))
        ));
    }

    #[test]
    fn static_eps_text() {
        assert_eq!("infinite".parse::<StaticEps>().unwrap(), StaticEps::Infinite);
        assert_eq!("10.102".parse::<StaticEps>().unwrap(), StaticEps::Finite(10.102));
        assert!("ten".parse::<StaticEps>().is_err());
    }

    #[test]
    fn register_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let store = MaterialStore::open(dir.path()).unwrap();
        let rec = MaterialRecord::new(
            "odd-glass",
            PermittivityModel::ninham_parsegian(0.1 + 0.2, 3.3e13, 1.0 / 3.0, 7.77e15).unwrap(),
            "made up",
        )
        .unwrap();
        store.register(&rec).unwrap();
        assert_eq!(store.get("odd-glass").unwrap(), rec);
        assert_eq!(store.list().unwrap(), vec!["odd-glass".to_string()]);
        assert!(matches!(store.register(&rec), Err(CasimirError::DuplicateMaterial(_))));
        assert_eq!(resolve_material("odd-glass", Some(&store)).unwrap(), rec);
    }

    #[test]
    fn builtin_names_are_reserved() {
        let dir = tempfile::tempdir().unwrap();
        let store = MaterialStore::open(dir.path()).unwrap();
        let rec = builtin_material("alumina").unwrap();
        assert!(matches!(store.register(&rec), Err(CasimirError::DuplicateMaterial(_))));
        let bad = MaterialRecord::new("../escape", PermittivityModel::Constant(2.0), "").unwrap();
        assert!(store.register(&bad).is_err());
    }

    #[test]
    fn tabulated_material_evaluates_identically() {
        let (wp, g) = (1.37e16, 5.3e13);
        let rows: Vec<OpticalSample> = (0..60)
            .map(|k| {
                let omega = 1e14 * 10f64.powf(k as f64 / 20.0);
                let re = 1.0 - wp * wp / (omega * omega + g * g);
                let im = wp * wp * g / (omega * (omega * omega + g * g));
                let modulus = (re * re + im * im).sqrt();
                let n1 = ((modulus + re) / 2.0).sqrt();
                OpticalSample {
                    omega,
                    n1,
                    n2: im / (2.0 * n1),
                }
            })
            .collect();
        let data = OpticalDataset::new(rows, "synthetic Drude metal").unwrap();
        let model = PermittivityModel::tabulated(data, Some(DrudeParams::GOLD)).unwrap();
        let rec = MaterialRecord::new("synthetic-au", model, "generated").unwrap();

        let dir = tempfile::tempdir().unwrap();
        let store = MaterialStore::open(dir.path()).unwrap();
        store.register(&rec).unwrap();
        let back = store.get("synthetic-au").unwrap();
        assert_eq!(back, rec);
        for k in 0..10 {
            let xi = 1e13 * 10f64.powf(k as f64 * 0.3);
            assert_eq!(
                back.model.eval_epsilon(xi).unwrap(),
                rec.model.eval_epsilon(xi).unwrap()
            );
        }
    }

    #[test]
    fn hand_written_document_loads() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("glass.material"),
            "name = \"glass\"\nstatic_eps = \"4\"\n[model]\nkind = \"constant\"\neps = 4.0\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("liar.material"),
            "name = \"liar\"\nstatic_eps = \"5\"\n[model]\nkind = \"constant\"\neps = 4.0\n",
        )
        .unwrap();
        let store = MaterialStore::open(dir.path()).unwrap();
        assert_eq!(store.get("glass").unwrap().model, PermittivityModel::Constant(4.0));
        assert!(matches!(store.get("liar"), Err(CasimirError::Load { .. })));
        assert!(matches!(store.get("absent"), Err(CasimirError::UnknownMaterial(_))));
    }
}
