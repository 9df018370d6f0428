//! Command implementations for the `cqopt` binary.
//!
//! Every command returns the text it would print, so the integration tests
//! can drive the same code paths without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cqopt::experiment::{run_experiment, ExperimentConfig, OutputFormat, DEFAULT_RUNS, DEFAULT_SCHEDULE};
use cqopt::io::{parse_poly, parse_tensor};
use cqopt::prob_lab::{estimate_tail_prob, ProbeResult};
use cqopt::sampling::DEFAULT_SEED;
use cqopt::solvers::{estimate_min, tau_p, theoretical_ratio};
use cqopt::{best_rank_one, solve_form, solve_poly, CQVector, MultilinearForm, SolveReport};

#[derive(Debug, Parser)]
#[command(name = "cqopt", version, about = "Optimization over commutative quaternion spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximize Re F(x¹, …, x^d) over unit spheres for a tensor file.
    SolveF(SolveFArgs),
    /// Maximize Re H(x) over the unit sphere for a polynomial file.
    SolveP(SolvePArgs),
    /// Best rank-one approximation of a tensor file.
    RankOne(RankOneArgs),
    /// Approximation-ratio tables for the all-ones n×n×n instance.
    Experiment(ExperimentArgs),
    /// Monte Carlo estimate of the sphere tail probability.
    ProbCheck(ProbCheckArgs),
}

#[derive(Debug, Args)]
pub struct SolveFArgs {
    #[arg(long)]
    pub tensor: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report the worst-case ratio formula for this γ.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolvePArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Also estimate the minimum of Re H by solving for -H.
    #[arg(long)]
    pub estimate_min: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RankOneArgs {
    #[arg(long)]
    pub tensor: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Comma-separated dimensions.
    #[arg(long = "n", value_delimiter = ',', default_values_t = vec![2usize, 3, 4, 5, 6, 7])]
    pub n_list: Vec<usize>,
    /// Comma-separated, strictly increasing trial counts.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE.to_vec())]
    pub trial_schedule: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
    /// Omit the timestamp line so identical inputs give identical bytes.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct ProbCheckArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn out(&self) -> Option<&Path> {
        match self {
            Command::SolveF(a) => a.out.as_deref(),
            Command::SolveP(a) => a.out.as_deref(),
            Command::RankOne(a) => a.out.as_deref(),
            Command::Experiment(a) => a.out.as_deref(),
            Command::ProbCheck(a) => a.out.as_deref(),
        }
    }
}

/// Runs a command and returns its output text. When `--out` is given the
/// text is written there as well.
pub fn run(cli: &Cli) -> Result<String> {
    let text = match &cli.command {
        Command::SolveF(a) => cmd_solve_f(a)?,
        Command::SolveP(a) => cmd_solve_p(a)?,
        Command::RankOne(a) => cmd_rank_one(a)?,
        Command::Experiment(a) => cmd_experiment(a)?,
        Command::ProbCheck(a) => cmd_prob_check(a)?,
    };
    if let Some(path) = cli.command.out() {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(text)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn render_vector(v: &CQVector) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("; ")
}

fn render_report(out: &mut String, r: &SolveReport) {
    let _ = writeln!(out, "objective: {}", r.objective);
    let _ = writeln!(out, "trials: {}", r.trials);
    let _ = writeln!(out, "best_trial: {}", r.best_trial);
    let _ = writeln!(out, "seed: {}", r.seed);
    let _ = writeln!(out, "degenerate: {}", r.degenerate);
    if let Some(u) = r.upper_bound {
        let _ = writeln!(out, "upper_bound: {u}");
    }
    if let Some(t) = r.theoretical_ratio {
        let _ = writeln!(out, "theoretical_ratio: {t}");
    }
    for (k, x) in r.solution.iter().enumerate() {
        let _ = writeln!(out, "x{}: {}", k + 1, render_vector(x));
    }
    if !r.signs.is_empty() {
        let signs: Vec<String> = r.signs.iter().map(i8::to_string).collect();
        let _ = writeln!(out, "signs: {}", signs.join(" "));
    }
}

pub fn cmd_solve_f(a: &SolveFArgs) -> Result<String> {
    let tensor = parse_tensor(&read(&a.tensor)?).with_context(|| format!("parsing {}", a.tensor.display()))?;
    let form = MultilinearForm::new(tensor)?;
    let mut report = solve_form(&form, a.trials, a.seed)?;
    if let Some(g) = a.gamma {
        report.theoretical_ratio = Some(theoretical_ratio(form.dims(), g)?);
    }
    let mut out = String::new();
    render_report(&mut out, &report);
    Ok(out)
}

pub fn cmd_solve_p(a: &SolvePArgs) -> Result<String> {
    let poly = parse_poly(&read(&a.poly)?).with_context(|| format!("parsing {}", a.poly.display()))?;
    let mut report = solve_poly(&poly, a.trials, a.seed)?;
    if let Some(g) = a.gamma {
        report.theoretical_ratio = Some(tau_p(poly.degree(), poly.dim(), g)?);
    }
    let mut out = String::new();
    render_report(&mut out, &report);
    if a.estimate_min {
        let _ = writeln!(out, "min_estimate: {}", estimate_min(&poly, a.trials, a.seed)?);
    }
    Ok(out)
}

pub fn cmd_rank_one(a: &RankOneArgs) -> Result<String> {
    let tensor = parse_tensor(&read(&a.tensor)?).with_context(|| format!("parsing {}", a.tensor.display()))?;
    let r = best_rank_one(&tensor, a.trials, a.seed)?;
    let mut out = String::new();
    let _ = writeln!(out, "lambda: {}", r.lambda);
    let _ = writeln!(out, "tensor_norm: {}", tensor.norm());
    let _ = writeln!(out, "residual: {}", r.residual);
    let _ = writeln!(out, "direct_residual: {}", r.direct_residual);
    let _ = writeln!(out, "identity_gap: {}", r.identity_gap());
    let _ = writeln!(out, "trials: {}", r.report.trials);
    let _ = writeln!(out, "seed: {}", r.report.seed);
    for (k, x) in r.factors.iter().enumerate() {
        let _ = writeln!(out, "x{}: {}", k + 1, render_vector(x));
    }
    Ok(out)
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<String> {
    let cfg = ExperimentConfig {
        n_list: a.n_list.clone(),
        trial_schedule: a.trial_schedule.clone(),
        runs: a.runs,
        seed: a.seed,
        out: a.out.clone(),
        format: a.format,
    };
    let result = run_experiment(&cfg)?;
    let mut out = String::new();
    if !a.deterministic {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let _ = match a.format {
            OutputFormat::Csv => writeln!(out, "# generated at unix time {secs}"),
            OutputFormat::Markdown => writeln!(out, "<!-- generated at unix time {secs} -->"),
        };
    }
    out.push_str(&result.render(a.format));
    Ok(out)
}

pub fn cmd_prob_check(a: &ProbCheckArgs) -> Result<String> {
    let r: ProbeResult = estimate_tail_prob(a.n, a.gamma, a.delta, a.samples, a.seed, None)?;
    Ok(format!("{}\n{}\n", ProbeResult::CSV_HEADER, r.csv_row()))
}
