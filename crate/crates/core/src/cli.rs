//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 numeric failure, 3 tolerance breach.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dynamics::{Dynamics, TrajectoryConfig};
use crate::invariance::{kinetics_preservation, random_params, random_states, reduced_model_residual};
use crate::model::{param_label, parse_param_label};
use crate::numeric_base::{base_parameters, certify_rank, BaseParamSolution, DpDiagnostic, LevelSpectrum};
use crate::svd::svd;
use crate::symbolic::{run_plan, Plan, SymbolicSolution};
use crate::{load_mechanism, sla, Error, GeomParams, Mechanism, PScalar, PrecisionLevel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "inertial-base", version, about = "Base inertial parameters of rigid multibody mechanisms")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Model file or directory holding model.json; `sla` selects the built-in suspension.
    #[arg(long, global = true, default_value = "sla")]
    pub model: String,
    /// Working precision: decimal digits or `native`.
    #[arg(long, global = true, default_value = "30")]
    pub digits: String,
    /// Comma-separated precision ladder for rank certification.
    #[arg(long, global = true, value_delimiter = ',')]
    pub digits_ladder: Option<Vec<String>>,
    /// Trajectory samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Trajectory period expression, e.g. `2*pi`.
    #[arg(long, global = true)]
    pub period: Option<String>,
    /// Comma-separated parameters to eliminate, e.g. `m1,Iyy1`; `plan` uses the plan's eliminated set.
    #[arg(long, global = true, value_delimiter = ',')]
    pub pin: Option<Vec<String>>,
    /// Transfer plan file or directory holding plan.json.
    #[arg(long, global = true)]
    pub plan: Option<PathBuf>,
    /// Output directory; reports go to stdout only when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Geometry override `NAME=VALUE`, repeatable.
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    pub set: Vec<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Assemble the observation matrix W.
    Observation,
    /// Singular values over a precision ladder and rank certification.
    Svdscan {
        /// Also compute the double-precision spectrum.
        #[arg(long)]
        with_dp: bool,
    },
    /// Base parameters from the SVD of W.
    BaseNumeric {
        /// Use this rank instead of certifying one.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Base parameters from the transfer plan.
    BaseSymbolic,
    /// Numeric against symbolic base parameters with a shared pin set.
    Compare {
        /// Max allowed entrywise |β_num − β_sym|; default 10^(8−P).
        #[arg(long)]
        beta_tol: Option<f64>,
        /// Max allowed relative reduced-model residual; default 10^(5−P).
        #[arg(long)]
        residual_tol: Option<f64>,
        /// Random parameter vectors for the residual.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Torque and Lagrangian equivalence under the plan.
    Invariance {
        #[arg(long, default_value_t = 20)]
        states: usize,
        #[arg(long, default_value_t = 10)]
        params: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Relative torque tolerance; default 1e-10 at native precision, 10^(8−P) otherwise.
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub model: String,
    pub model_digest: String,
    pub geometry: Vec<(String, String)>,
    pub trajectory: TrajectoryConfig,
    pub digits: String,
    pub ladder: Vec<String>,
    pub pins: Vec<String>,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    /// SHA-256 of the manifest with the timestamp left out.
    pub fn digest(&self) -> String {
        let mut m = self.clone();
        m.timestamp = 0;
        hex::encode(Sha256::digest(serde_json::to_vec(&m).expect("manifest serializes")))
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) => exit_code_of(e),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn exit_code_of(e: &Error) -> i32 {
    match e {
        Error::ToleranceBreach(_) => EXIT_TOLERANCE,
        Error::NonConvergence { .. }
        | Error::SingularJacobian { .. }
        | Error::Kinematics { .. }
        | Error::SvdNoConvergence(_)
        | Error::PinnedSingular(_)
        | Error::Unsolvable(_)
        | Error::DivisionByZero(_) => EXIT_NUMERIC,
        Error::PlanStep { source, .. } => exit_code_of(source),
        _ => EXIT_USAGE,
    }
}

/// Parses arguments, runs, prints diagnostics to stderr, returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("\nFor usage, run with --help.");
            }
            e.exit_code()
        }
    }
}

struct Context {
    name: String,
    mech: Mechanism,
    plan_source: Option<PlanSource>,
    traj: TrajectoryConfig,
    level: PrecisionLevel,
    ladder: Vec<PrecisionLevel>,
}

enum PlanSource {
    Builtin,
    File(PathBuf),
}

fn parse_level(s: &str) -> Result<PrecisionLevel, CliError> {
    s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn context(g: &GlobalArgs) -> Result<Context, CliError> {
    let mut overrides = GeomParams::default();
    for kv in &g.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects NAME=VALUE, got '{kv}'")))?;
        overrides.set(k.trim(), v.trim()).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let (name, mech, mut plan_source) = if g.model == "sla" {
        let f = sla::sla_with(&overrides)?;
        ("sla".to_string(), f.mechanism, Some(PlanSource::Builtin))
    } else {
        let path = Path::new(&g.model);
        if !path.exists() {
            return Err(CliError::Usage(format!("model path '{}' does not exist", path.display())));
        }
        let mech = load_mechanism(path, &overrides)?;
        let plan = path.is_dir().then(|| path.join("plan.json")).filter(|p| p.exists());
        (g.model.clone(), mech, plan.map(PlanSource::File))
    };
    if let Some(p) = &g.plan {
        if !p.exists() {
            return Err(CliError::Usage(format!("plan path '{}' does not exist", p.display())));
        }
        plan_source = Some(PlanSource::File(p.clone()));
    }
    let mut traj = TrajectoryConfig::default_for(mech.dof());
    if let Some(n) = g.samples {
        if n == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        traj.samples = n;
    }
    if let Some(p) = &g.period {
        traj.period = p.clone();
    }
    let level = parse_level(&g.digits)?;
    let ladder = match &g.digits_ladder {
        Some(v) => v.iter().map(|s| parse_level(s)).collect::<Result<Vec<_>, _>>()?,
        None if level.is_native() => vec![level],
        None => vec![level, PrecisionLevel::decimal(2 * level.digits())?],
    };
    Ok(Context { name, mech, plan_source, traj, level, ladder })
}

impl Context {
    fn plan(&self) -> Result<Plan, CliError> {
        match &self.plan_source {
            Some(PlanSource::Builtin) => Ok(Plan::from_json(sla::PLAN_JSON)?),
            Some(PlanSource::File(p)) => Ok(Plan::from_path(p)?),
            None => Err(CliError::Usage("no transfer plan: pass --plan".into())),
        }
    }

    fn observation(&self, level: PrecisionLevel) -> Result<crate::dynamics::ObservationMatrix, Error> {
        let d = Dynamics::new(&self.mech, level)?;
        d.assemble_observation(&self.traj, &self.mech.initial_q(level)?)
    }

    fn manifest(&self, command: &str, pins: &[usize]) -> RunManifest {
        RunManifest {
            command: command.into(),
            model: self.name.clone(),
            model_digest: self.mech.digest(),
            geometry: self
                .mech
                .geometry()
                .iter()
                .map(|(k, v)| (k.to_string(), v.map_or("symbolic".into(), crate::model::rational_text)))
                .collect(),
            trajectory: self.traj.clone(),
            digits: self.level.to_string(),
            ladder: self.ladder.iter().map(ToString::to_string).collect(),
            pins: pins.iter().map(|&i| param_label(i)).collect(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Resolves `--pin` against the mechanism and, for `plan`, the symbolic solution.
fn pins(g: &GlobalArgs, mech: &Mechanism, sym: Option<&SymbolicSolution>) -> Result<Option<Vec<usize>>, CliError> {
    let Some(labels) = &g.pin else { return Ok(None) };
    if labels.len() == 1 && labels[0] == "plan" {
        let sym = sym.ok_or_else(|| CliError::Usage("--pin plan needs a transfer plan".into()))?;
        return Ok(Some(sym.eliminated()));
    }
    let mut v = labels
        .iter()
        .map(|l| parse_param_label(l.trim(), mech.n_bodies()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    v.sort_unstable();
    Ok(Some(v))
}

struct Output {
    dir: Option<PathBuf>,
    stdout: String,
}

impl Output {
    fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d).map_err(Error::from)?;
        }
        Ok(Output { dir, stdout: String::new() })
    }

    fn file(&self, name: &str, contents: &str) -> Result<(), CliError> {
        if let Some(d) = &self.dir {
            std::fs::write(d.join(name), contents).map_err(|e| Error::Io(format!("{name}: {e}")))?;
        }
        Ok(())
    }

    fn json(&self, name: &str, v: &serde_json::Value) -> Result<(), CliError> {
        self.file(name, &(serde_json::to_string_pretty(v).map_err(Error::from)? + "\n"))
    }

    fn manifest(&self, m: &RunManifest) -> Result<serde_json::Value, CliError> {
        self.json("manifest.json", &serde_json::to_value(m).map_err(Error::from)?)?;
        Ok(serde_json::json!({ "file": "manifest.json", "digest": m.digest() }))
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

fn matrix_csv(w: &crate::linalg::Matrix) -> String {
    let mut s = String::new();
    for i in 0..w.rows() {
        let row: Vec<String> = w.row(i).iter().map(PScalar::to_decimal_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn spectrum_csv(sigma: &[PScalar]) -> String {
    let mut s = String::from("index,value\n");
    for (k, v) in sigma.iter().enumerate() {
        let _ = writeln!(s, "{},{}", k + 1, v.to_decimal_string());
    }
    s
}

fn level_tag(l: PrecisionLevel) -> String {
    if l.is_native() {
        "dp".into()
    } else {
        format!("{}", l.digits())
    }
}

/// Runs a parsed command and returns the text for stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let g = &cli.global;
    let ctx = context(g)?;
    let mut out = Output::new(g.out.clone())?;
    match &cli.command {
        Command::Observation => cmd_observation(&ctx, &mut out)?,
        Command::Svdscan { with_dp } => cmd_svdscan(&ctx, &mut out, *with_dp)?,
        Command::BaseNumeric { rank } => cmd_base_numeric(&ctx, g, &mut out, *rank)?,
        Command::BaseSymbolic => cmd_base_symbolic(&ctx, &mut out)?,
        Command::Compare { beta_tol, residual_tol, trials } => {
            cmd_compare(&ctx, g, &mut out, *beta_tol, *residual_tol, *trials)?
        }
        Command::Invariance { states, params, seed, tol } => {
            cmd_invariance(&ctx, &mut out, *states, *params, *seed, *tol)?
        }
    }
    Ok(out.stdout)
}

fn cmd_observation(ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let obs = ctx.observation(ctx.level)?;
    let csv = matrix_csv(&obs.w);
    let mut h = Sha256::new();
    for s in &obs.states {
        for x in s.q.iter().chain(&s.qd).chain(&s.qdd) {
            h.update(x.to_decimal_string().as_bytes());
            h.update(b",");
        }
    }
    let manifest = ctx.manifest("observation", &[]);
    let m = out.manifest(&manifest)?;
    out.file("observation.csv", &csv)?;
    out.json(
        "observation.json",
        &serde_json::json!({
            "manifest": m,
            "rows": obs.w.rows(),
            "cols": obs.w.cols(),
            "digits": obs.level.to_string(),
            "trajectory": ctx.traj,
            "columns": (0..obs.w.cols()).map(param_label).collect::<Vec<_>>(),
            "states_digest": hex::encode(h.finalize()),
        }),
    )?;
    if out.dir.is_some() {
        out.line(format!("W: {} x {} at {} digits", obs.w.rows(), obs.w.cols(), obs.level));
    } else {
        out.stdout.push_str(&csv);
    }
    Ok(())
}

fn cmd_svdscan(ctx: &Context, out: &mut Output, with_dp: bool) -> Result<(), CliError> {
    if ctx.ladder.len() < 2 {
        return Err(CliError::Usage("svdscan needs --digits-ladder with at least two levels".into()));
    }
    let (report, _) = certify_rank(|l| ctx.observation(l).map(|o| o.w), &ctx.ladder)?;
    let manifest = ctx.manifest("svdscan", &[]);
    let m = out.manifest(&manifest)?;
    for l in &report.levels {
        out.file(&format!("spectrum_{}.csv", level_tag(l.level)), &spectrum_csv(&l.sigma))?;
    }
    let mut json = serde_json::json!({ "manifest": m, "ridge": report.to_json() });
    match report.rank {
        Some(r) => out.line(format!("certified rank {r} (max drift {:.3e})", report.drift)),
        None => out.line("no certified rank"),
    }
    if let Some(r) = report.rank {
        if let Some(s) = report.shrink.last().and_then(|v| v.first()) {
            out.line(format!("sigma_{} shrink between top levels: {:.3e}", r + 1, s));
        }
    }
    if with_dp {
        let lv = PrecisionLevel::DoubleNative;
        let w = ctx.observation(lv)?.w;
        let s = svd(&w, lv)?;
        out.file("spectrum_dp.csv", &spectrum_csv(&s.sigma))?;
        let dp = DpDiagnostic::from_sigma(s.sigma_f64(), 1e-10);
        let dp_ladder = crate::numeric_base::certify_spectra(vec![
            LevelSpectrum { level: lv, sigma: s.sigma.clone() },
            report.levels.last().expect("ladder").clone(),
        ])?;
        let gap = report.rank.map(|r| dp.gap_after(r));
        out.line(format!(
            "double precision: tolerance rank {}, rank certified against {} digits: {}",
            dp.rank,
            report.levels.last().expect("ladder").level,
            dp_ladder.rank.map_or("none".into(), |r| r.to_string())
        ));
        if let (Some(r), Some(gap)) = (report.rank, gap) {
            out.line(format!("double precision sigma_{r}/sigma_{}: {gap:.3e}", r + 1));
        }
        json["double_precision"] = serde_json::json!({
            "tolerance_rank": dp.rank,
            "gaps": dp.gaps.iter().map(|g| format!("{g:e}")).collect::<Vec<_>>(),
            "ladder_rank": dp_ladder.rank,
        });
    }
    out.json("ridge.json", &json)?;
    Ok(())
}

fn numeric_solution(
    ctx: &Context,
    rank: Option<usize>,
    pins: Option<&[usize]>,
) -> Result<(BaseParamSolution, crate::linalg::Matrix), CliError> {
    let lv = ctx.level;
    let w = ctx.observation(lv)?.w;
    let s = svd(&w, lv)?;
    let (rank, forced) = match rank {
        Some(r) => (r, true),
        None if lv.is_native() => (DpDiagnostic::from_sigma(s.sigma_f64(), 1e-10).rank, true),
        None => {
            let mut ladder = ctx.ladder.clone();
            if !ladder.contains(&lv) {
                ladder.push(lv);
                ladder.sort_by_key(|l| l.digits());
            }
            let (report, _) = certify_rank(|l| ctx.observation(l).map(|o| o.w), &ladder)?;
            let r = report
                .rank
                .ok_or_else(|| Error::Unsolvable("no rank certified over the ladder; pass --rank".into()))?;
            (r, false)
        }
    };
    Ok((base_parameters(&s, rank, forced, pins)?, w))
}

fn cmd_base_numeric(ctx: &Context, g: &GlobalArgs, out: &mut Output, rank: Option<usize>) -> Result<(), CliError> {
    let sym = if g.pin.as_deref() == Some(&["plan".to_string()]) {
        Some(run_plan(&ctx.mech, &ctx.plan()?)?)
    } else {
        None
    };
    let pins = pins(g, &ctx.mech, sym.as_ref())?;
    let (sol, _) = numeric_solution(ctx, rank, pins.as_deref())?;
    let manifest = ctx.manifest("base-numeric", pins.as_deref().unwrap_or(&[]));
    let m = out.manifest(&manifest)?;
    let mut json = sol.to_json();
    json["manifest"] = m;
    out.json("base_numeric.json", &json)?;
    let table = sol.render(8).join("\n") + "\n";
    out.file("base_numeric.txt", &table)?;
    out.line(format!(
        "rank {}{}, V22 condition {:.3e}",
        sol.rank,
        if sol.forced { " (not certified)" } else { "" },
        sol.v22_condition
    ));
    out.stdout.push_str(&table);
    Ok(())
}

fn cmd_base_symbolic(ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let sol = run_plan(&ctx.mech, &ctx.plan()?)?;
    let manifest = ctx.manifest("base-symbolic", &sol.eliminated());
    let m = out.manifest(&manifest)?;
    let mut json = sol.to_json();
    json["manifest"] = m;
    out.json("base_symbolic.json", &json)?;
    let table = sol.render().join("\n") + "\n";
    out.file("base_symbolic.txt", &table)?;
    out.line(format!(
        "{} base parameters ({} without effect, {} regrouped)",
        sol.kept().len(),
        sol.struck.len(),
        sol.annihilated.len()
    ));
    out.stdout.push_str(&table);
    Ok(())
}

fn cmd_compare(
    ctx: &Context,
    g: &GlobalArgs,
    out: &mut Output,
    beta_tol: Option<f64>,
    residual_tol: Option<f64>,
    trials: usize,
) -> Result<(), CliError> {
    let lv = ctx.level;
    let sym = run_plan(&ctx.mech, &ctx.plan()?)?;
    let ev = sym.evaluate(ctx.mech.geometry(), lv)?;
    let pins = pins(g, &ctx.mech, Some(&sym))?.unwrap_or_else(|| sym.eliminated());
    if pins != ev.eliminated {
        return Err(CliError::Lib(Error::Validation(format!(
            "pin set [{}] differs from the plan's eliminated set [{}]",
            pins.iter().map(|&i| param_label(i)).collect::<Vec<_>>().join(","),
            ev.eliminated.iter().map(|&i| param_label(i)).collect::<Vec<_>>().join(",")
        ))));
    }
    let (num, w) = numeric_solution(ctx, Some(ev.kept.len()), Some(&pins))?;
    let diff = ev.max_beta_diff(&num)?.to_f64();
    let params = random_params(ctx.mech.n_params(), trials, 7, lv);
    let residual = reduced_model_residual(&w, &num, &params);
    let p = lv.digits() as i32;
    let beta_tol = beta_tol.unwrap_or(10f64.powi(8 - p));
    let residual_tol = residual_tol.unwrap_or(10f64.powi(5 - p));
    let manifest = ctx.manifest("compare", &pins);
    let m = out.manifest(&manifest)?;
    out.json(
        "compare.json",
        &serde_json::json!({
            "manifest": m,
            "max_beta_diff": format!("{diff:e}"),
            "beta_tolerance": format!("{beta_tol:e}"),
            "reduced_model_residual": format!("{residual:e}"),
            "residual_tolerance": format!("{residual_tol:e}"),
            "v22_condition": format!("{:e}", num.v22_condition),
        }),
    )?;
    out.line(format!("max |beta_num - beta_sym| = {diff:.3e} (tolerance {beta_tol:.1e})"));
    out.line(format!("reduced-model residual = {residual:.3e} (tolerance {residual_tol:.1e})"));
    let mut breaches = Vec::new();
    if diff > beta_tol {
        breaches.push(format!("beta difference {diff:.3e} > {beta_tol:.1e}"));
    }
    if residual > residual_tol {
        breaches.push(format!("reduced-model residual {residual:.3e} > {residual_tol:.1e}"));
    }
    if !breaches.is_empty() {
        print!("{}", out.stdout);
        out.stdout.clear();
        return Err(Error::ToleranceBreach(breaches.join("; ")).into());
    }
    Ok(())
}

fn cmd_invariance(
    ctx: &Context,
    out: &mut Output,
    n_states: usize,
    n_params: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let lv = ctx.level;
    let sym = run_plan(&ctx.mech, &ctx.plan()?)?;
    let d = Dynamics::new(&ctx.mech, lv)?;
    let states = random_states(&d, &ctx.mech, &ctx.traj, n_states, seed)?;
    let params = random_params(ctx.mech.n_params(), n_params, seed.wrapping_add(1), lv);
    let r = kinetics_preservation(&d, &ctx.mech, &sym, &states, &params)?;
    let tol = tol.unwrap_or(if lv.is_native() { 1e-10 } else { 10f64.powi(8 - lv.digits() as i32) });
    let manifest = ctx.manifest("invariance", &sym.eliminated());
    let m = out.manifest(&manifest)?;
    let mut json = r.to_json();
    json["manifest"] = m;
    json["tolerance"] = serde_json::json!(format!("{tol:e}"));
    out.json("invariance.json", &json)?;
    out.line(format!("{} states x {} parameter vectors", r.states, r.params));
    out.line(format!("max relative torque difference {:.3e} (tolerance {tol:.1e})", r.torque));
    out.line(format!("max Lagrangian difference spread {:.3e}", r.lagrangian));
    if r.torque > tol || r.lagrangian > tol {
        print!("{}", out.stdout);
        out.stdout.clear();
        return Err(Error::ToleranceBreach(format!(
            "torque {:.3e}, Lagrangian {:.3e} against {tol:.1e}",
            r.torque, r.lagrangian
        ))
        .into());
    }
    Ok(())
}
