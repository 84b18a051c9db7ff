//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid state or state file,
//! 3 SPA-R domain or moment-estimation failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{
    analyze_realigned, max_violating_p, q1_zhang, q2_rmoment, spa_r_verdict, CriterionReport,
};
use crate::density::DensityMatrix;
use crate::error::Error;
use crate::estimation::{
    m1_case_bounds, m1_interval_quadratic, simulate_s, EstimationInput, MomentInterval,
};
use crate::io::{format_f64, read_state, to_json_string, write_state};
use crate::realign::realign;
use crate::spa::{certify_completely_positive, spa_threshold, CpCertificate, SpaThreshold};
use crate::states::{random_separable, StateFamily};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_STATE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_)
        | Error::DomainInconsistent { .. }
        | Error::Estimation(_)
        | Error::NoConvergence { .. } => EXIT_DOMAIN,
        _ => EXIT_STATE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spa-realign",
    version,
    about = "Realignment and SPA-R entanglement criteria"
)]
pub struct Cli {
    /// Margin on every strict inequality in a verdict.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Seed for randomly generated states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every criterion on one state and print a JSON report.
    Analyze(AnalyzeArgs),
    /// Evaluate a family on a parameter grid and print CSV.
    Sweep(SweepArgs),
    /// Largest violating p for the alpha-state family at alpha = 0.1, ..., 0.9.
    Table1(Table1Args),
    /// Bound the first moment of R(rho) from s = Tr[R~ P].
    #[command(name = "estimate-m1")]
    EstimateM1(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct StateSource {
    /// State file: {"dims": [dA, dB], "matrix": [[re, im], ...]}, row-major.
    #[arg(long, conflicts_with_all = ["family", "random_separable"])]
    pub state: Option<PathBuf>,

    /// One of rho_t, rho_a, isotropic, alpha_state.
    #[arg(long, requires = "param", conflicts_with = "random_separable")]
    pub family: Option<StateFamily>,

    /// Family parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,

    /// Subsystem dimension for the isotropic family and random states.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    /// Random separable d x d state with this many product terms (uses --seed).
    #[arg(long)]
    pub random_separable: Option<usize>,
}

/// Where an analysed state came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum InputDescriptor {
    Family { family: String, param: f64 },
    File { path: String },
    RandomSeparable { terms: usize, seed: u64 },
}

impl StateSource {
    fn load(&self, seed: u64) -> Result<Option<(DensityMatrix, InputDescriptor)>, Failure> {
        if let Some(path) = &self.state {
            let rho = read_state(path)?;
            return Ok(Some((
                rho,
                InputDescriptor::File {
                    path: path.display().to_string(),
                },
            )));
        }
        if let Some(family) = self.family {
            let param = self
                .param
                .ok_or_else(|| Failure::usage("--family needs --param"))?;
            let rho = family.build(param, self.dim)?;
            return Ok(Some((
                rho,
                InputDescriptor::Family {
                    family: family.name().into(),
                    param,
                },
            )));
        }
        if let Some(terms) = self.random_separable {
            if terms == 0 || self.dim == 0 {
                return Err(Failure::usage(
                    "--random-separable needs at least one term and --dim >= 1",
                ));
            }
            let rho = random_separable(self.dim, self.dim, terms, seed)?;
            return Ok(Some((
                rho,
                InputDescriptor::RandomSeparable { terms, seed },
            )));
        }
        if self.param.is_some() {
            return Err(Failure::usage("--param needs --family"));
        }
        Ok(None)
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is not in [0, 1]"))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: StateSource,

    /// Mixing probability; defaults to the threshold l of the state.
    #[arg(long, value_parser = probability)]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: StateFamily,

    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,

    /// Number of parameter grid points.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,

    #[arg(long, default_value_t = 0.0, value_parser = probability)]
    pub p_from: f64,

    #[arg(long, default_value_t = 1.0, value_parser = probability)]
    pub p_to: f64,

    /// Number of p grid points.
    #[arg(long, default_value_t = 11)]
    pub p_steps: usize,

    /// Evaluate each parameter only at its own threshold p = l.
    #[arg(long)]
    pub p_at_l: bool,

    /// Subsystem dimension for the isotropic family.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    /// Also write every swept state as a state file into this directory.
    #[arg(long)]
    pub dump_states: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Bisection width in p.
    #[arg(long, default_value_t = 1e-7)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Measured s = Tr[R~ P]; computed from the state when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,

    /// Subsystem dimension d.
    #[arg(long)]
    pub d: Option<usize>,

    /// Offset k; taken from the state's threshold when omitted.
    #[arg(long)]
    pub k: Option<f64>,

    #[command(flatten)]
    pub source: StateSource,

    /// Mixing probability used to simulate s; defaults to l.
    #[arg(long, value_parser = probability)]
    pub p: Option<f64>,
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

/// JSON document printed by `analyze`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisRecord {
    pub input: InputDescriptor,
    pub dims: [usize; 2],
    pub p: f64,
    pub tol: f64,
    pub report: CriterionReport,
    pub spa: SpaThreshold,
    pub cp_certificate: CpCertificate,
}

/// `analyze` without the I/O.
pub fn analysis_record(
    rho: &DensityMatrix,
    input: InputDescriptor,
    p: Option<f64>,
    tol: f64,
) -> Result<AnalysisRecord, Error> {
    let r = realign(rho);
    let spa = spa_threshold(&r)?;
    let p = p.unwrap_or(spa.l);
    let report = analyze_realigned(&r, p, tol)?;
    let cp_certificate = certify_completely_positive(rho, &r, p)?;
    let (a, b) = rho.dims();
    Ok(AnalysisRecord {
        input,
        dims: [a, b],
        p,
        tol,
        report,
        spa,
        cp_certificate,
    })
}

fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![from];
    }
    (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect()
}

pub const SWEEP_HEADER: &str = "param,p,traceNormSpaR,upperBound,violated,l,k,q1,q2";

fn sweep(args: &SweepArgs, tol: f64) -> Result<String, Failure> {
    let (lo, hi) = args.family.parameter_range(args.dim);
    let bad = |msg: String| Err(Failure::usage(msg));
    if !(args.from.is_finite() && args.to.is_finite()) || args.from > args.to {
        return bad(format!(
            "invalid range --from {} --to {}",
            args.from, args.to
        ));
    }
    if args.steps == 0 || args.p_steps == 0 {
        return bad("--steps and --p-steps must be at least 1".into());
    }
    if args.p_from > args.p_to {
        return bad(format!(
            "invalid range --p-from {} --p-to {}",
            args.p_from, args.p_to
        ));
    }
    if args.from < lo - 1e-12 || args.to > hi + 1e-12 {
        return bad(format!("{} is defined on [{lo}, {hi}]", args.family));
    }
    if let Some(dir) = &args.dump_states {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    }
    let params = grid(args.from, args.to, args.steps);
    let p_grid = grid(args.p_from, args.p_to, args.p_steps);

    let blocks: Vec<Result<String, Failure>> = params
        .par_iter()
        .enumerate()
        .map(|(index, &param)| {
            let rho = args.family.build(param, args.dim)?;
            if let Some(dir) = &args.dump_states {
                let path = dir.join(format!("{}_{index:04}.json", args.family));
                write_state(&path, &rho)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            let r = realign(&rho);
            let threshold = spa_threshold(&r)?;
            let q1 = q1_zhang(&r);
            let q2 = q2_rmoment(&r);
            let ps: Vec<f64> = if args.p_at_l {
                vec![threshold.l]
            } else {
                p_grid.clone()
            };
            let mut out = String::new();
            for p in ps {
                let check = spa_r_verdict(&r, p, tol)?;
                let fields = [
                    format_f64(param),
                    format_f64(p),
                    format_f64(check.trace_norm),
                    format_f64(check.upper_bound),
                    u8::from(check.verdict.is_entangled()).to_string(),
                    format_f64(threshold.l),
                    format_f64(threshold.k),
                    format_f64(q1),
                    format_f64(q2),
                ];
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            Ok(out)
        })
        .collect();

    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for block in blocks {
        csv.push_str(&block?);
    }
    Ok(csv)
}

/// `(α, p_max)` for `α = 0.1, ..., 0.9`.
pub fn table1_rows(tol: f64, step: f64) -> Result<Vec<(f64, Option<f64>)>, Error> {
    (1..=9)
        .into_par_iter()
        .map(|i| {
            let alpha = i as f64 / 10.0;
            let r = realign(&StateFamily::AlphaState.build(alpha, 3)?);
            Ok((alpha, max_violating_p(&r, tol, step)?))
        })
        .collect()
}

fn table1(args: &Table1Args, tol: f64) -> Result<String, Failure> {
    if !(args.step > 0.0 && args.step < 1.0) {
        return Err(Failure::usage("--step must lie in (0, 1)"));
    }
    let mut csv = String::from("alpha,pMax\n");
    for (alpha, p_max) in table1_rows(tol, args.step)? {
        let p = p_max.map(format_f64).unwrap_or_default();
        csv.push_str(&format!("{},{p}\n", format_f64(alpha)));
    }
    Ok(csv)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct EstimateInputRecord {
    s: f64,
    d: usize,
    k: f64,
    x: f64,
    discriminant: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct EstimateRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<InputDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    /// `Tr[R(ρ)]` when a state was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    true_m1: Option<f64>,
    input: EstimateInputRecord,
    quadratic: MomentInterval,
    cases: MomentInterval,
}

fn estimate(args: &EstimateArgs, seed: u64) -> Result<String, Failure> {
    let loaded = args.source.load(seed)?;
    let (s, d, k, source, p, true_m1) = match loaded {
        Some((rho, desc)) => {
            let r = realign(&rho);
            let threshold = spa_threshold(&r)?;
            let p = args.p.unwrap_or(threshold.l);
            let s = match args.s {
                Some(s) => s,
                None => simulate_s(&r, p, None)?,
            };
            let k = args.k.unwrap_or(threshold.k);
            (
                s,
                threshold.d,
                k,
                Some(desc),
                Some(p),
                Some(threshold.trace_r),
            )
        }
        None => {
            let (Some(s), Some(d), Some(k)) = (args.s, args.d, args.k) else {
                return Err(Failure::usage("give --s, --d and --k, or a state source"));
            };
            (s, d, k, None, None, None)
        }
    };
    let input = EstimationInput::new(s, d, k)?;
    let quadratic = m1_interval_quadratic(&input)?;
    let cases = m1_case_bounds(&input)?;
    let record = EstimateRecord {
        source,
        p,
        true_m1,
        input: EstimateInputRecord {
            s,
            d,
            k,
            x: input.x(),
            discriminant: input.discriminant(),
        },
        quadratic,
        cases,
    };
    Ok(to_json_string(&record) + "\n")
}

fn analyze(args: &AnalyzeArgs, tol: f64, seed: u64) -> Result<String, Failure> {
    let (rho, input) = args
        .source
        .load(seed)?
        .ok_or_else(|| Failure::usage("give --state, --family/--param or --random-separable"))?;
    let record = analysis_record(&rho, input, args.p, tol)?;
    Ok(to_json_string(&record) + "\n")
}

/// Runs a parsed command and returns its output text.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(Failure::usage("--tol must be a nonnegative number"));
    }
    match &cli.command {
        Command::Analyze(args) => analyze(args, cli.tol, cli.seed),
        Command::Sweep(args) => sweep(args, cli.tol),
        Command::Table1(args) => table1(args, cli.tol),
        Command::EstimateM1(args) => estimate(args, cli.seed),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(e.to_string())),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli).and_then(|text| emit(&text, cli.out.as_deref(), stdout)) {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}
