//! `casimir`: sweeps, single points, permittivity tables and the validation
//! suites of casimir-core.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numerical degradation.

mod config;
mod units;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use log::warn;
use serde::Serialize;

use casimir_core::constants::ELECTRON_VOLT;
use casimir_core::materials::BUILTIN_NAMES;
use casimir_core::permittivity::{load_optical_csv, FrequencyUnit};
use casimir_core::validation::{run_suite, Suite, ValidationOptions};
use casimir_core::{
    builtin_material, evaluate, resolve_material, sweep, CasimirError, DrudeParams, MaterialRecord, MaterialStore,
    Permittivity, PermittivityModel, PlateConfig, PointResult, SolverSettings, SweepAxis,
};

use config::{RunConfig, RunConfigDoc};
use units::{parse_length, parse_temperature};

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Thermal Casimir interaction between a metal and a dielectric plate"
)]
struct Cli {
    /// Directory of user `<name>.material` files.
    #[arg(long, global = true, env = "CASIMIR_STORE", default_value = "materials")]
    store: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configuration.
    Point(PointArgs),
    /// Sweep temperature or separation and write CSV.
    Sweep(SweepArgs),
    /// Run validation checks against closed forms and reference values.
    Validate(ValidateArgs),
    /// Tabulate ε(iξ) on a logarithmic frequency grid.
    PermTable(PermTableArgs),
    /// Manage the material store.
    #[command(subcommand)]
    Material(MaterialCommand),
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, default_value = "ideal-metal")]
    metal: String,
    #[arg(long)]
    dielectric: String,
    /// Plate separation with unit, e.g. `1um` or `600nm`.
    #[arg(short = 'a', long)]
    separation: String,
    /// Temperature with unit, e.g. `300K`.
    #[arg(short = 't', long)]
    temperature: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    metal: Option<String>,
    #[arg(long)]
    dielectric: Option<String>,
    #[arg(long, value_parser = parse_axis)]
    axis: Option<SweepAxis>,
    #[arg(long, requires = "to")]
    from: Option<String>,
    #[arg(long, requires = "from")]
    to: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    /// Value of the other variable, with unit.
    #[arg(long)]
    fixed: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Add an entropy column in eV/(m² K).
    #[arg(long)]
    entropy_ev: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(default_value = "all")]
    suite: Suite,
    /// Stored tabulated gold material for the real-material checks.
    #[arg(long, requires = "si")]
    au: Option<String>,
    /// Stored tabulated silicon material for the real-material checks.
    #[arg(long, requires = "au")]
    si: Option<String>,
    /// Random configurations in the thermodynamic consistency check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
struct PermTableArgs {
    #[arg(long)]
    material: String,
    /// Lowest ξ in rad/s.
    #[arg(long, default_value_t = 1e11)]
    from: f64,
    /// Highest ξ in rad/s.
    #[arg(long, default_value_t = 1e18)]
    to: f64,
    #[arg(long, default_value_t = 71)]
    steps: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MaterialCommand {
    /// Add a material to the store.
    Register(RegisterArgs),
    /// List built-in and stored materials.
    List,
}

#[derive(Args)]
#[command(group(ArgGroup::new("model").required(true).args(
    ["ideal_metal", "constant", "dilute", "ninham_parsegian", "drude", "tabulated"]
)))]
struct RegisterArgs {
    #[arg(long)]
    name: String,
    /// Free-text provenance.
    #[arg(long, default_value = "")]
    source: String,
    #[arg(long)]
    ideal_metal: bool,
    /// Frequency-independent permittivity.
    #[arg(long)]
    constant: Option<f64>,
    /// ε = 1 + η.
    #[arg(long)]
    dilute: Option<f64>,
    /// `C_IR,ω_IR,C_UV,ω_UV` with frequencies in rad/s.
    #[arg(long, value_parser = parse_list::<4>)]
    ninham_parsegian: Option<[f64; 4]>,
    /// `ω_p,γ` in rad/s.
    #[arg(long, value_parser = parse_list::<2>)]
    drude: Option<[f64; 2]>,
    /// Optical data CSV; copied into the store.
    #[arg(long)]
    tabulated: Option<PathBuf>,
    /// Frequency unit of the CSV when its header does not say.
    #[arg(long, requires = "tabulated")]
    unit: Option<FrequencyUnit>,
    /// Drude parameters `ω_p,γ` used below the tabulated range.
    #[arg(long, value_parser = parse_list::<2>, requires = "tabulated")]
    drude_tail: Option<[f64; 2]>,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    match s {
        "temperature" | "T" => Ok(SweepAxis::Temperature),
        "separation" | "a" => Ok(SweepAxis::Separation),
        _ => Err(format!("expected 'temperature' or 'separation', got '{s}'")),
    }
}

/// Failure with its exit code.
struct Exit {
    code: u8,
    message: String,
}

impl From<CasimirError> for Exit {
    fn from(e: CasimirError) -> Self {
        Exit {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_CONFIG },
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Exit>;

fn io_error(path: &Path, e: std::io::Error) -> Exit {
    Exit::from(CasimirError::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Exit> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Adding zero turns -0 into 0.
fn unsigned_zero(v: f64) -> f64 {
    v + 0.0
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{:e}", unsigned_zero(v))
    }
}

fn open_store(dir: &Path) -> Option<MaterialStore> {
    if dir.is_dir() {
        MaterialStore::open(dir).ok()
    } else {
        None
    }
}

fn resolve(name: &str, store: Option<&MaterialStore>) -> Result<MaterialRecord, Exit> {
    Ok(resolve_material(name, store)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Point(a) => cmd_point(a, &cli.store),
        Command::Sweep(a) => cmd_sweep(a, &cli.store),
        Command::Validate(a) => cmd_validate(a, &cli.store),
        Command::PermTable(a) => cmd_perm_table(a, &cli.store),
        Command::Material(MaterialCommand::Register(a)) => cmd_register(a, &cli.store),
        Command::Material(MaterialCommand::List) => cmd_list(&cli.store),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Diagnostics {
    effective_temperature_K: f64,
    tau: f64,
    free_energy_T0_J_m2: f64,
    pressure_T0_Pa: f64,
    low_confidence: bool,
    warnings: Vec<String>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct PointReport {
    metal: String,
    dielectric: String,
    separation_m: f64,
    temperature_K: f64,
    free_energy_J_m2: f64,
    pressure_Pa: f64,
    entropy_J_m2_K: f64,
    entropy_eV_m2_K: f64,
    delta_F: f64,
    delta_P: f64,
    diagnostics: Diagnostics,
}

impl PointReport {
    fn new(metal: &str, dielectric: &str, r: &PointResult) -> Self {
        let q = r.quantities;
        PointReport {
            metal: metal.to_string(),
            dielectric: dielectric.to_string(),
            separation_m: r.config.separation,
            temperature_K: r.config.temperature,
            free_energy_J_m2: unsigned_zero(q.free_energy),
            pressure_Pa: unsigned_zero(q.pressure),
            entropy_J_m2_K: unsigned_zero(q.entropy),
            entropy_eV_m2_K: unsigned_zero(q.entropy / ELECTRON_VOLT),
            delta_F: unsigned_zero(r.delta_f),
            delta_P: unsigned_zero(r.delta_p),
            diagnostics: Diagnostics {
                effective_temperature_K: r.config.effective_temperature(),
                tau: r.config.tau(),
                free_energy_T0_J_m2: unsigned_zero(r.zero_temperature.free_energy),
                pressure_T0_Pa: unsigned_zero(r.zero_temperature.pressure),
                low_confidence: r.low_confidence,
                warnings: r.warnings.clone(),
            },
        }
    }

    fn text(&self) -> String {
        let d = &self.diagnostics;
        let mut s = String::new();
        let rows = [
            ("free_energy_J_m2", self.free_energy_J_m2),
            ("pressure_Pa", self.pressure_Pa),
            ("entropy_J_m2_K", self.entropy_J_m2_K),
            ("entropy_eV_m2_K", self.entropy_eV_m2_K),
            ("delta_F", self.delta_F),
            ("delta_P", self.delta_P),
        ];
        let _ = writeln!(s, "{} | {}", self.metal, self.dielectric);
        let _ = writeln!(s, "a = {:e} m, T = {} K", self.separation_m, self.temperature_K);
        for (name, v) in rows {
            let _ = writeln!(s, "{name:<18}{}", fmt_num(v));
        }
        let _ = writeln!(s, "diagnostics:");
        let _ = writeln!(s, "  T_eff = {:.0} K", d.effective_temperature_K);
        let _ = writeln!(s, "  tau = {:.6}", d.tau);
        let _ = writeln!(s, "  F(T=0) = {:e} J/m^2", d.free_energy_T0_J_m2);
        let _ = writeln!(s, "  P(T=0) = {:e} Pa", d.pressure_T0_Pa);
        let _ = writeln!(s, "  low_confidence = {}", d.low_confidence);
        s
    }
}

fn cmd_point(args: PointArgs, store_dir: &Path) -> Outcome {
    let store = open_store(store_dir);
    let metal = resolve(&args.metal, store.as_ref())?;
    let dielectric = resolve(&args.dielectric, store.as_ref())?;
    let cfg = PlateConfig::new(parse_length(&args.separation)?, parse_temperature(&args.temperature)?)?;
    let r = evaluate(&cfg, &metal.model, &dielectric.model, &SolverSettings::default())?;
    for w in &r.warnings {
        warn!("{w}");
    }
    let report = PointReport::new(&metal.name, &dielectric.name, &r);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.text());
    }
    Ok(if r.low_confidence { EXIT_NUMERICAL } else { 0 })
}

fn sweep_overrides(args: &SweepArgs) -> RunConfigDoc {
    RunConfigDoc {
        metal: args.metal.clone(),
        dielectric: args.dielectric.clone(),
        axis: args.axis,
        range: args.from.clone().zip(args.to.clone()).map(|(a, b)| [a, b]),
        steps: args.steps,
        fixed: args.fixed.clone(),
        output: args.output.clone(),
        entropy_ev: args.entropy_ev.then_some(true),
        tolerances: None,
    }
}

fn cmd_sweep(args: SweepArgs, store_dir: &Path) -> Outcome {
    let base = match &args.config {
        Some(path) => RunConfigDoc::load(path)?,
        None => RunConfigDoc::default(),
    };
    let cfg = RunConfig::try_from(base.merge(sweep_overrides(&args)))?;
    let store = open_store(store_dir);
    let metal = resolve(&cfg.metal, store.as_ref())?;
    let dielectric = resolve(&cfg.dielectric, store.as_ref())?;
    let rows = sweep(
        &cfg.sweep,
        &cfg.template,
        &metal.model,
        &dielectric.model,
        &cfg.tolerances,
    )?;

    let mut code = 0;
    let mut out = String::from("axis_value,free_energy_J_m2,pressure_Pa,entropy_J_m2_K,delta_F,delta_P");
    if cfg.entropy_ev {
        out.push_str(",entropy_eV_m2_K");
    }
    out.push('\n');
    for row in &rows {
        let values = match &row.result {
            Ok(r) => {
                if r.low_confidence {
                    warn!(
                        "row {}: derivative error estimate above threshold",
                        fmt_num(row.axis_value)
                    );
                    code = EXIT_NUMERICAL;
                }
                let q = r.quantities;
                [q.free_energy, q.pressure, q.entropy, r.delta_f, r.delta_p]
            }
            Err(e) => {
                warn!("row {}: {e}", fmt_num(row.axis_value));
                code = EXIT_NUMERICAL;
                [f64::NAN; 5]
            }
        };
        out.push_str(&fmt_num(row.axis_value));
        for v in values {
            out.push(',');
            out.push_str(&fmt_num(v));
        }
        if cfg.entropy_ev {
            out.push(',');
            out.push_str(&fmt_num(values[2] / ELECTRON_VOLT));
        }
        out.push('\n');
    }
    emit(&out, cfg.output.as_deref())?;
    Ok(code)
}

fn cmd_validate(args: ValidateArgs, store_dir: &Path) -> Outcome {
    let store = open_store(store_dir);
    let tabulated = |name: &Option<String>| name.as_deref().map(|n| resolve(n, store.as_ref())).transpose();
    let opts = ValidationOptions {
        tabulated_au: tabulated(&args.au)?,
        tabulated_si: tabulated(&args.si)?,
        consistency_samples: args.samples,
        seed: args.seed,
        ..ValidationOptions::default()
    };
    let report = run_suite(args.suite, &opts);
    println!("{report}");
    let failures: Vec<_> = report.failures().collect();
    if failures.is_empty() {
        return Ok(0);
    }
    println!("failing checks:");
    for c in failures {
        println!("  [{}] {}", c.criterion, c.name);
    }
    Ok(EXIT_VALIDATION)
}

fn cmd_perm_table(args: PermTableArgs, store_dir: &Path) -> Outcome {
    if !(args.from > 0.0 && args.from < args.to && args.to.is_finite()) {
        return Err(CasimirError::Config(format!("need 0 < from < to, got {} and {}", args.from, args.to)).into());
    }
    if args.steps < 2 {
        return Err(CasimirError::Config(format!("need at least 2 steps, got {}", args.steps)).into());
    }
    let store = open_store(store_dir);
    let material = resolve(&args.material, store.as_ref())?;
    let n = args.steps - 1;
    let (lo, hi) = (args.from.log10(), args.to.log10());
    let mut code = 0;
    let mut out = String::from("xi_rad_s,epsilon\n");
    for i in 0..=n {
        let xi = match i {
            0 => args.from,
            i if i == n => args.to,
            i => 10f64.powf(lo + (hi - lo) * i as f64 / n as f64),
        };
        let eps = match material.model.eval_epsilon(xi) {
            Ok(Permittivity::Finite(e)) => fmt_num(e),
            Ok(Permittivity::Infinite) => "inf".to_string(),
            Err(e) => {
                warn!("xi = {xi:e}: {e}");
                code = EXIT_NUMERICAL;
                "nan".to_string()
            }
        };
        let _ = writeln!(out, "{},{eps}", fmt_num(xi));
    }
    emit(&out, args.output.as_deref())?;
    Ok(code)
}

fn register_model(args: &RegisterArgs) -> Result<PermittivityModel, CasimirError> {
    if args.ideal_metal {
        return Ok(PermittivityModel::IdealMetal);
    }
    if let Some(e) = args.constant {
        return PermittivityModel::constant(e);
    }
    if let Some(eta) = args.dilute {
        return PermittivityModel::dilute(eta);
    }
    if let Some(p) = args.ninham_parsegian {
        return PermittivityModel::ninham_parsegian(p[0], p[1], p[2], p[3]);
    }
    if let Some([wp, g]) = args.drude {
        return PermittivityModel::drude(wp, g);
    }
    let path = args.tabulated.as_ref().expect("clap enforces one model");
    let data = load_optical_csv(path, args.unit)?;
    let tail = args.drude_tail.map(|[wp, g]| DrudeParams::new(wp, g)).transpose()?;
    PermittivityModel::tabulated(data, tail)
}

fn cmd_register(args: RegisterArgs, store_dir: &Path) -> Outcome {
    let model = register_model(&args)?;
    let record = MaterialRecord::new(args.name.clone(), model, args.source.clone())?;
    let store = MaterialStore::open(store_dir)?;
    store.register(&record)?;
    println!(
        "registered {} (static eps {}) in {}",
        record.name,
        record.static_eps,
        store.dir().display()
    );
    Ok(0)
}

fn cmd_list(store_dir: &Path) -> Outcome {
    println!("name,origin,static_eps,source");
    for name in BUILTIN_NAMES {
        let r = builtin_material(name)?;
        println!(
            "{},builtin,{},\"{}\"",
            r.name,
            r.static_eps,
            r.source.replace('"', "\"\"")
        );
    }
    let Some(store) = open_store(store_dir) else {
        return Ok(0);
    };
    for name in store.list()? {
        match store.get(&name) {
            Ok(r) => println!(
                "{},store,{},\"{}\"",
                r.name,
                r.static_eps,
                r.source.replace('"', "\"\"")
            ),
            Err(e) => warn!("{name}: {e}"),
        }
    }
    Ok(0)
}
