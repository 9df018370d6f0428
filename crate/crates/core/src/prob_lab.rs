//! Monte Carlo checks of the sphere tail probability and the chi-square
//! tail inequality, plus the bound curves used for comparison plots.
//!
//! The bound curves carry an unknown leading constant; it is set to 1 here
//! and the curves are only ever reported, never asserted against.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::CQVector;
use crate::sampling::{sample_sphere, RandomSource};

/// Draws per batch; batch `b` uses stream `b`.
pub const BATCH: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 1_000;
/// Width of the Monte Carlo slack band, in standard errors.
pub const SLACK_SIGMAS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    pub n: usize,
    pub gamma: f64,
    pub delta: Option<f64>,
    pub samples: u64,
    pub hits: u64,
    pub empirical_prob: f64,
    /// `sqrt(γ ln n / n)`
    pub threshold: f64,
    /// `n^(−4.5γ) / sqrt(ln n)`
    pub bound45: f64,
    /// `n^(−(2+δ+δ²/2)γ) / sqrt(ln n)`, when `δ` is given.
    pub bound_improved: Option<f64>,
}

impl ProbeResult {
    pub const CSV_HEADER: &'static str =
        "n,gamma,delta,samples,threshold,empirical_prob,bound45,bound_improved";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.gamma,
            opt(self.delta),
            self.samples,
            self.threshold,
            self.empirical_prob,
            self.bound45,
            opt(self.bound_improved)
        )
    }

    /// Standard error of `empirical_prob`.
    pub fn std_error(&self) -> f64 {
        let p = self.empirical_prob;
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

pub fn tail_threshold(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    (gamma * nf.ln() / nf).sqrt()
}

pub fn bound45(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    nf.powf(-4.5 * gamma) / nf.ln().sqrt()
}

pub fn improved_exponent_factor(delta: f64) -> f64 {
    2.0 + delta + delta * delta / 2.0
}

pub fn bound_improved(n: usize, gamma: f64, delta: f64) -> f64 {
    let nf = n as f64;
    nf.powf(-improved_exponent_factor(delta) * gamma) / nf.ln().sqrt()
}

fn check_probe_args(n: usize, gamma: f64, samples: u64, a: Option<&CQVector>) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let nf = n as f64;
    if gamma * nf.ln() >= nf {
        return Err(Error::InvalidArgument(format!(
            "requires gamma ln n < n, got {gamma} * ln {n} = {}",
            gamma * nf.ln()
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "samples must be >= {MIN_SAMPLES}, got {samples}"
        )));
    }
    if let Some(a) = a {
        if a.len() != n {
            return Err(crate::error::dim_mismatch(n, a.len()));
        }
        if a.norm() == 0.0 {
            return Err(Error::ZeroInput("direction vector a"));
        }
    }
    Ok(())
}

/// Indicator of `Re(aᵀξ) ≥ threshold · ‖a‖` for each of `samples` uniform
/// sphere draws `ξ`. With `a = None` the first basis vector is used.
pub fn tail_events(
    n: usize,
    gamma: f64,
    samples: u64,
    seed: u64,
    a: Option<&CQVector>,
) -> Result<Vec<bool>> {
    check_probe_args(n, gamma, samples, a)?;
    let cut = tail_threshold(n, gamma) * a.map_or(1.0, CQVector::norm);
    let batches = samples.div_ceil(BATCH);
    let per_batch: Vec<Vec<bool>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(samples - b * BATCH);
            let mut src = RandomSource::new(seed, b);
            (0..count)
                .map(|_| {
                    let xi = sample_sphere(n, &mut src)?;
                    let proj = match a {
                        Some(a) => a.dot(&xi)?.re(),
                        None => xi[0].re(),
                    };
                    Ok(proj >= cut)
                })
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_batch.into_iter().flatten().collect())
}

/// Empirical `Prob{Re(aᵀξ) ≥ sqrt(γ ln n / n) · ‖a‖}` for `ξ` uniform on the
/// quaternion unit sphere, alongside both bound curves.
pub fn estimate_tail_prob(
    n: usize,
    gamma: f64,
    delta: Option<f64>,
    samples: u64,
    seed: u64,
    a: Option<&CQVector>,
) -> Result<ProbeResult> {
    if let Some(d) = delta {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be >= 0, got {d}")));
        }
    }
    let hits = tail_events(n, gamma, samples, seed, a)?
        .into_iter()
        .filter(|&e| e)
        .count() as u64;
    Ok(ProbeResult {
        n,
        gamma,
        delta,
        samples,
        hits,
        empirical_prob: hits as f64 / samples as f64,
        threshold: tail_threshold(n, gamma),
        bound45: bound45(n, gamma),
        bound_improved: delta.map(|d| bound_improved(n, gamma, d)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareCheck {
    pub t: f64,
    pub samples: u64,
    /// `2‖b‖ sqrt(t) + 2‖b‖∞ t`
    pub threshold: f64,
    pub empirical: f64,
    /// `e^(−t)`
    pub bound: f64,
    /// `SLACK_SIGMAS · sqrt(e^(−t) / samples)`
    pub slack: f64,
}

impl ChiSquareCheck {
    pub fn passed(&self) -> bool {
        self.empirical <= self.bound + self.slack
    }
}

/// Empirical `Prob{z ≥ 2‖b‖√t + 2‖b‖∞ t}` for `z = Σ bᵢ(ηᵢ² − 1)`, `ηᵢ`
/// i.i.d. standard normal, against the bound `e^(−t)`.
pub fn check_chi_square_tail(t: f64, b: &[f64], samples: u64, seed: u64) -> Result<ChiSquareCheck> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if b.is_empty() || b.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(
            "b must be a nonempty vector of finite nonnegative weights".into(),
        ));
    }
    if b.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroInput("weight vector b"));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let norm2 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let norm_inf = b.iter().fold(0.0f64, |m, &v| m.max(v));
    let threshold = 2.0 * norm2 * t.sqrt() + 2.0 * norm_inf * t;
    let batches = samples.div_ceil(BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let count = BATCH.min(samples - batch * BATCH);
            let mut src = RandomSource::new(seed, batch);
            (0..count)
                .filter(|_| {
                    let z: f64 = b
                        .iter()
                        .map(|&w| {
                            let eta = src.normal();
                            w * (eta * eta - 1.0)
                        })
                        .sum();
                    z >= threshold
                })
                .count() as u64
        })
        .sum();
    let bound = (-t).exp();
    Ok(ChiSquareCheck {
        t,
        samples,
        threshold,
        empirical: hits as f64 / samples as f64,
        bound,
        slack: SLACK_SIGMAS * (bound / samples as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurveRow {
    pub n: usize,
    pub exponent45: f64,
    pub exponent_improved: f64,
    pub curve45: f64,
    pub curve_improved: f64,
}

/// Both bound curves over `ns`, constant set to 1.
pub fn bound_curves(ns: &[usize], gamma: f64, delta: f64) -> Result<Vec<BoundCurveRow>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    let factor = improved_exponent_factor(delta);
    let rows: Vec<BoundCurveRow> = ns
        .iter()
        .map(|&n| BoundCurveRow {
            n,
            exponent45: 4.5 * gamma,
            exponent_improved: factor * gamma,
            curve45: bound45(n, gamma),
            curve_improved: bound_improved(n, gamma, delta),
        })
        .collect();
    if factor < 4.5 {
        assert!(rows.iter().all(|r| r.exponent_improved < r.exponent45));
    }
    Ok(rows)
}
