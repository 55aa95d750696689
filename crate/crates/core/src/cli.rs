//! Command-line front end: `basis`, `run`, `secular`, `spin`, `atto`,
//! `slits`.
//!
//! Primary output goes to `--out` or stdout; summaries go to stderr.
//! Exit codes: 0 success, 1 template mismatch, 2 input error, 3 step
//! failure. A secular FAIL verdict is a result, not an error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::config::{load_json, BasisConfig, ConfigError};
use crate::dynamics::{double_slit_pattern, visibility, FourStateModel, Hamiltonian, SecularReport, SlitGeometry};
use crate::fmt_num;
use crate::labels::EnLabel;
use crate::linalg::CMatrix;
use crate::protocol::script::{template_specs, Script, TemplateSpec};
use crate::protocol::{
    attosecond_init, check_templates_tol, halted_light_scenario, lambda_scenario, one_photon_dissociation_scenario,
    AttoParams, DissociationParams, HaltedLightParams, LambdaParams, Outcome, ProtocolError, RunMode,
};
use crate::qstate::SUPPORT_TOL;
use crate::spin::{all_functions, Which};

/// Directory searched for relative input paths missing from the working
/// directory.
pub const CONFIG_DIR_ENV: &str = "PHOTONIC_CONFIG_DIR";

#[derive(Debug, Parser)]
#[command(name = "photonic", version, about = "Photonic base-state simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Support threshold: an amplitude counts as nonzero above this.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for stochastic lifetimes; overrides the script.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run mode; overrides the script.
    #[arg(long, global = true)]
    pub mode: Option<RunMode>,
    /// Expected support templates to compare the trace against.
    #[arg(long, global = true)]
    pub expect: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a basis from a registry file and list it in canonical order.
    Basis {
        config: PathBuf,
        /// JSON listing instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run a protocol script and write the trace CSV.
    Run {
        #[arg(required_unless_present = "builtin")]
        script: Option<PathBuf>,
        #[arg(long, conflicts_with = "script")]
        builtin: Option<Builtin>,
        /// Outcome of the dissociation builtin.
        #[arg(long, value_enum, default_value = "re-emission")]
        outcome: OutcomeArg,
        /// Write the script as JSON here and exit without running.
        #[arg(long)]
        export_script: Option<PathBuf>,
        /// Write the builtin's expected templates as JSON here.
        #[arg(long)]
        export_expect: Option<PathBuf>,
    },
    /// Solve the four-state secular model and report the channel ordering.
    Secular {
        /// Model parameters or an explicit 4×4 matrix; defaults built in.
        params: Option<PathBuf>,
        /// A number or `E0`..`E3`; defaults to `E1`.
        #[arg(long)]
        anchor: Option<String>,
        /// Also tabulate this many halvings of every coupling.
        #[arg(long, default_value_t = 0)]
        halvings: u32,
    },
    /// Print the singlet and triplet spin-space functions.
    Spin {
        /// Labels to exchange in the permutation check.
        #[arg(long, default_value = "both")]
        permute: Which,
    },
    /// Build the comb state imprinted by a short pulse.
    Atto { params: Option<PathBuf> },
    /// Two-slit intensity pattern and fringe visibility.
    Slits {
        /// Slit amplitude as `re` or `re,im`.
        #[arg(long, default_value = "1")]
        c1: String,
        #[arg(long, default_value = "1")]
        c2: String,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// Geometry file `{d, l, kappa, half_width}`.
        #[arg(long)]
        geometry: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Lambda,
    HaltedLight,
    Dissociation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutcomeArg {
    ReEmission,
    LowFrequency,
    ZeroZero,
    Dissociation,
}

impl From<OutcomeArg> for Outcome {
    fn from(o: OutcomeArg) -> Self {
        match o {
            OutcomeArg::ReEmission => Outcome::ReEmission,
            OutcomeArg::LowFrequency => Outcome::LowFrequency,
            OutcomeArg::ZeroZero => Outcome::ZeroZero,
            OutcomeArg::Dissociation => Outcome::Dissociation,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Mismatch(String),
    Step(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Input(_) => 2,
            CliError::Step(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Mismatch(m) => write!(f, "{m}"),
            CliError::Step(m) => write!(f, "step failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Resolves a relative path against the config directory when it does not
/// exist as given.
pub fn resolve_input(p: &Path) -> PathBuf {
    if p.is_absolute() || p.exists() {
        return p.to_path_buf();
    }
    match std::env::var_os(CONFIG_DIR_ENV) {
        Some(dir) => {
            let cand = Path::new(&dir).join(p);
            if cand.exists() {
                cand
            } else {
                p.to_path_buf()
            }
        }
        None => p.to_path_buf(),
    }
}

fn load<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, CliError> {
    Ok(load_json(&resolve_input(p))?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(input)?;
    std::fs::write(path, text + "\n").map_err(|e| input(format!("{}: {e}", path.display())))
}

struct Output<'a> {
    out: Option<&'a Path>,
}

impl Output<'_> {
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let tol = cli.tol.unwrap_or(SUPPORT_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(input(format!("--tol must be a finite nonnegative number, got {tol}")));
    }
    let out = Output { out: cli.out.as_deref() };
    match &cli.command {
        Command::Basis { config, json } => cmd_basis(&out, config, *json),
        Command::Run { script, builtin, outcome, export_script, export_expect } => {
            let (script, builtin_templates) = match (script, builtin) {
                (Some(p), _) => (load::<Script>(p)?, None),
                (None, Some(b)) => {
                    let (s, t) = builtin_script(*b, (*outcome).into())?;
                    (s, Some(t))
                }
                (None, None) => return Err(input("a script path or --builtin is required")),
            };
            if export_script.is_some() || export_expect.is_some() {
                if let Some(p) = export_script {
                    write_json(p, &script)?;
                }
                if let Some(p) = export_expect {
                    let t = builtin_templates.ok_or_else(|| input("--export-expect needs --builtin"))?;
                    write_json(p, &t)?;
                }
                return Ok(());
            }
            cmd_run(&out, &script, cli, tol)
        }
        Command::Secular { params, anchor, halvings } => {
            cmd_secular(&out, params.as_deref(), anchor.as_deref(), *halvings)
        }
        Command::Spin { permute } => out.emit(&spin_report(*permute)),
        Command::Atto { params } => cmd_atto(&out, params.as_deref()),
        Command::Slits { c1, c2, samples, geometry } => cmd_slits(&out, c1, c2, *samples, geometry.as_deref()),
    }
}

fn cmd_basis(out: &Output<'_>, config: &Path, json: bool) -> Result<(), CliError> {
    let cfg: BasisConfig = load(config)?;
    let (basis, _) = cfg.build()?;
    let text = if json {
        basis.to_json() + "\n"
    } else {
        let mut s = String::new();
        for (i, e) in basis.elements().iter().enumerate() {
            let _ = writeln!(s, "{i}\t{}\t{e}", fmt_num(e.level()));
        }
        s
    };
    out.emit(&text)?;
    eprintln!("{} elements", basis.len());
    Ok(())
}

/// Builtin scenario as a script plus its templates.
pub fn builtin_script(b: Builtin, outcome: Outcome) -> Result<(Script, Vec<TemplateSpec>), CliError> {
    let s = match b {
        Builtin::Lambda => lambda_scenario(&LambdaParams::default()),
        Builtin::HaltedLight => halted_light_scenario(&HaltedLightParams::default()),
        Builtin::Dissociation => {
            one_photon_dissociation_scenario(&DissociationParams { outcome, ..DissociationParams::default() })
        }
    }
    .map_err(input)?;
    Ok((Script::from_scenario(&s), template_specs(&s.basis, &s.templates)))
}

fn cmd_run(out: &Output<'_>, script: &Script, cli: &Cli, tol: f64) -> Result<(), CliError> {
    let mode = cli.mode.unwrap_or(script.mode);
    let seed = cli.seed.or(script.seed);
    if mode == RunMode::Stochastic && seed.is_none() {
        return Err(input("stochastic mode requires --seed"));
    }
    let compiled = script.compile()?;
    let expect = match &cli.expect {
        Some(p) => {
            let specs: Vec<TemplateSpec> = load(p)?;
            Some(compiled.templates(&specs)?)
        }
        None => None,
    };
    let trace = compiled.run(seed, Some(mode)).map_err(|e| match e {
        ProtocolError::MissingSeed => input(e),
        ProtocolError::Step { step, source } => CliError::Step(format!("step {step}: {source}")),
        other => CliError::Step(other.to_string()),
    })?;
    out.emit(&trace.to_csv())?;
    eprintln!("{} records, {} emissions", trace.len(), trace.emissions.len());
    if let Some(templates) = expect {
        let bad = check_templates_tol(&trace, &templates, tol);
        if !bad.is_empty() {
            let mut msg = format!("{} of {} templates mismatch", bad.len(), templates.len());
            for m in &bad {
                let _ = write!(
                    msg,
                    "\n  {} at record {}: expected {:?}, found {:?}",
                    m.label, m.record, m.expected, m.found
                );
            }
            return Err(CliError::Mismatch(msg));
        }
        eprintln!("{} templates match", templates.len());
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SecularInput {
    Model(FourStateModel),
    Matrix(MatrixInput),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixInput {
    /// Rows of `[re, im]` pairs.
    matrix: [[C64; 4]; 4],
    #[serde(default = "default_threshold")]
    threshold: f64,
}

fn default_threshold() -> f64 {
    FourStateModel::default().threshold
}

fn parse_anchor(s: &str, diag: [f64; 4]) -> Result<f64, CliError> {
    if let Some(i) = s.strip_prefix('E').and_then(|d| d.parse::<usize>().ok()) {
        return diag.get(i).copied().ok_or_else(|| input(format!("anchor `{s}`: expected E0..E3")));
    }
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| input(format!("anchor `{s}`: expected a number or E0..E3")))
}

fn cmd_secular(out: &Output<'_>, params: Option<&Path>, anchor: Option<&str>, halvings: u32) -> Result<(), CliError> {
    let parsed = match params {
        Some(p) => load::<SecularInput>(p)?,
        None => SecularInput::Model(FourStateModel::default()),
    };
    let (model, h, threshold) = match parsed {
        SecularInput::Model(m) => {
            let h = m.hamiltonian().map_err(input)?;
            let t = m.threshold;
            (Some(m), h, t)
        }
        SecularInput::Matrix(mi) => {
            let rows: Vec<Vec<C64>> = mi.matrix.iter().map(|r| r.to_vec()).collect();
            let h = Hamiltonian::from_matrix(FourStateModel::default().basis(), CMatrix::from_rows(&rows))
                .map_err(input)?;
            (None, h, mi.threshold)
        }
    };
    let m = h.matrix();
    let diag = [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re];
    let anchor = match anchor {
        Some(a) => parse_anchor(a, diag)?,
        None => diag[1],
    };
    let report = SecularReport::solve(&h, anchor, threshold);
    let mut text = report.render();
    if halvings > 0 {
        let model = model.ok_or_else(|| input("--halvings needs a model parameter file"))?;
        text.push_str(&halving_table(&model, anchor, halvings)?);
    }
    out.emit(&text)
}

/// `scale,|C1|,|C2|,|C3|` rows for `V, V/2, …`, solved in parallel.
fn halving_table(model: &FourStateModel, anchor: f64, halvings: u32) -> Result<String, CliError> {
    let rows: Vec<Result<SecularReport, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..=halvings)
            .map(|k| {
                let m = model.scaled(0.5f64.powi(k as i32));
                s.spawn(move || m.report(anchor).map_err(input))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread")).collect()
    });
    let mut text = String::from("scale,abs_C1,abs_C2,abs_C3\n");
    for (k, r) in rows.into_iter().enumerate() {
        let r = r?;
        let _ = writeln!(
            text,
            "{},{},{},{}",
            fmt_num(0.5f64.powi(k as i32)),
            fmt_num(r.magnitudes[1]),
            fmt_num(r.magnitudes[2]),
            fmt_num(r.magnitudes[3])
        );
    }
    Ok(text)
}

/// Each function with `⟨S²⟩`, `⟨S_z⟩` and its overlap with the permuted copy.
pub fn spin_report(which: Which) -> String {
    let fs = all_functions();
    let mut s = String::new();
    for f in &fs {
        let swapped = f.permute_labels(which).inner(f);
        let _ = writeln!(s, "{f}");
        let _ = writeln!(
            s,
            "{},S2,{},Sz,{},permute_{},{}",
            f.name,
            fmt_num(f.s2()),
            fmt_num(f.sz()),
            format!("{which:?}").to_lowercase(),
            fmt_num(swapped.re)
        );
    }
    let mut worst: f64 = 0.0;
    for (i, a) in fs.iter().enumerate() {
        for b in &fs[i + 1..] {
            worst = worst.max(a.inner(b).norm());
        }
    }
    let _ = writeln!(s, "max_overlap,{}", fmt_num(worst));
    s
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttoInput {
    #[serde(default)]
    pulse: AttoParams,
    #[serde(default)]
    root: Option<EnLabel>,
    #[serde(default)]
    excited: Vec<EnLabel>,
}

fn cmd_atto(out: &Output<'_>, params: Option<&Path>) -> Result<(), CliError> {
    let inp = match params {
        Some(p) => load::<AttoInput>(p)?,
        None => AttoInput { pulse: AttoParams::default(), root: None, excited: Vec::new() },
    };
    let root = match inp.root {
        Some(r) => r,
        None => EnLabel::new(0, 0, 0.0).map_err(input)?,
    };
    let s = attosecond_init(&inp.pulse, root, &inp.excited).map_err(input)?;
    let mut text = String::from("index,mode,omega,re,im,notation\n");
    for (i, e) in s.basis().elements().iter().enumerate() {
        let slot = &e.photons()[0];
        let a = s.amp(i);
        let _ = writeln!(
            text,
            "{i},{},{},{},{},{e}",
            slot.mode().id(),
            fmt_num(slot.mode().omega()),
            fmt_num(a.re),
            fmt_num(a.im)
        );
    }
    out.emit(&text)?;
    eprintln!("{} comb elements, norm {}", s.len(), fmt_num(s.norm()));
    Ok(())
}

fn parse_complex(s: &str) -> Result<C64, CliError> {
    let bad = || input(format!("amplitude `{s}`: expected `re` or `re,im`"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

fn cmd_slits(out: &Output<'_>, c1: &str, c2: &str, samples: usize, geometry: Option<&Path>) -> Result<(), CliError> {
    let (c1, c2) = (parse_complex(c1)?, parse_complex(c2)?);
    let geom = match geometry {
        Some(p) => load::<SlitGeometry>(p)?,
        None => SlitGeometry::default(),
    };
    let pattern = double_slit_pattern(c1, c2, &geom, samples).map_err(input)?;
    let v = visibility(c1, c2, &geom, samples).map_err(input)?;
    let mut text = String::from("x,intensity\n");
    for (x, i) in pattern {
        let _ = writeln!(text, "{},{}", fmt_num(x), fmt_num(i));
    }
    out.emit(&text)?;
    eprintln!("visibility {}", fmt_num(v));
    Ok(())
}
