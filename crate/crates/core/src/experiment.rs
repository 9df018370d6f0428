//! Approximation-ratio tables for the all-ones cubic form.
//!
//! For each `n` the instance is the real all-ones `n×n×n` tensor, whose
//! maximum over the product of quaternion spheres is at most `2·sqrt(n³)`.
//! Each run draws one stream of `max(schedule)` trials and records the running
//! maximum at every scheduled count, so a run's ratios never decrease along
//! the schedule.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::MultilinearForm;
use crate::linalg::CQTensor;
use crate::sampling::{derive_seed, DEFAULT_SEED};
use crate::solvers::solve_form_trace;

pub const DEFAULT_SCHEDULE: [u64; 9] = [1, 5, 10, 20, 50, 100, 500, 1000, 10000];
pub const DEFAULT_RUNS: u32 = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}` (csv|markdown)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub trial_schedule: Vec<u64>,
    pub runs: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: (2..=7).collect(),
            trial_schedule: DEFAULT_SCHEDULE.to_vec(),
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::InvalidArgument("n list must be nonempty with every n >= 1".into()));
        }
        if self.trial_schedule.first().is_none_or(|&t| t == 0) {
            return Err(Error::InvalidArgument("trial schedule must be nonempty and start at >= 1".into()));
        }
        if self.trial_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("trial schedule must be strictly increasing".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidArgument("runs must be >= 1".into()));
        }
        Ok(())
    }
}

/// `2·sqrt(n³)`, the upper bound for the all-ones `n×n×n` instance.
pub fn all_ones_upper_bound(n: usize) -> f64 {
    2.0 * (n as f64).powi(3).sqrt()
}

pub fn all_ones_instance(n: usize) -> Result<MultilinearForm> {
    MultilinearForm::new(CQTensor::ones(&[n, n, n]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub n: usize,
    pub trials: u64,
    pub run: u32,
    pub objective: f64,
    pub upper_bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSummary {
    pub n: usize,
    pub trials: u64,
    pub average: f64,
    pub worst: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub n_list: Vec<usize>,
    pub trial_schedule: Vec<u64>,
    pub runs: u32,
    pub seed: u64,
    pub records: Vec<ExperimentRecord>,
}

/// Per-run ratios at each checkpoint. Run `r` uses seed `derive_seed(seed, r)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let max_trials = *cfg.trial_schedule.last().expect("validated");
    let mut records = Vec::new();
    for &n in &cfg.n_list {
        let form = all_ones_instance(n)?;
        let bound = all_ones_upper_bound(n);
        for run in 0..cfg.runs {
            let trace = solve_form_trace(&form, max_trials, derive_seed(cfg.seed, u64::from(run)))?;
            let mut best = f64::NEG_INFINITY;
            let mut done = 0usize;
            for &k in &cfg.trial_schedule {
                for &v in &trace[done..k as usize] {
                    best = best.max(v);
                }
                done = k as usize;
                records.push(ExperimentRecord {
                    n,
                    trials: k,
                    run,
                    objective: best,
                    upper_bound: bound,
                    ratio: best / bound,
                });
            }
        }
    }
    Ok(ExperimentResult {
        n_list: cfg.n_list.clone(),
        trial_schedule: cfg.trial_schedule.clone(),
        runs: cfg.runs,
        seed: cfg.seed,
        records,
    })
}

impl ExperimentResult {
    pub fn summary(&self, n: usize, trials: u64) -> Option<RatioSummary> {
        let ratios: Vec<f64> = self
            .records
            .iter()
            .filter(|r| r.n == n && r.trials == trials)
            .map(|r| r.ratio)
            .collect();
        if ratios.is_empty() {
            return None;
        }
        Some(RatioSummary {
            n,
            trials,
            average: ratios.iter().sum::<f64>() / ratios.len() as f64,
            worst: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        })
    }

    pub fn summaries(&self) -> Vec<RatioSummary> {
        self.n_list
            .iter()
            .flat_map(|&n| self.trial_schedule.iter().map(move |&k| (n, k)))
            .filter_map(|(n, k)| self.summary(n, k))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,trials,run,objective,upper_bound,ratio\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.trials, r.run, r.objective, r.upper_bound, r.ratio);
        }
        out
    }

    /// Tables of average and worst ratios, two dimensions per table.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for (t, pair) in self.n_list.chunks(2).enumerate() {
            if t > 0 {
                out.push('\n');
            }
            let _ = write!(out, "| Number of trials |");
            for n in pair {
                let _ = write!(out, " n={n} Average ratio | n={n} Worst ratio |");
            }
            out.push('\n');
            out.push_str("|---:|");
            for _ in pair {
                out.push_str("---:|---:|");
            }
            out.push('\n');
            for &k in &self.trial_schedule {
                let _ = write!(out, "| {k} |");
                for &n in pair {
                    let s = self.summary(n, k).expect("every (n, trials) pair is recorded");
                    let _ = write!(out, " {:.4} | {:.4} |", s.average, s.worst);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}
