//! Sphere-constrained maximization of `Re F` and `Re H`.
//!
//! * [`solve_bilinear`] solves the two-slot case exactly via the dominant
//!   singular pair of the real block embedding.
//! * [`solve_form`] is the randomized method for order `d ≥ 3`: draw the
//!   `d - 2` smallest slots uniformly on their spheres, solve the remaining
//!   two slots exactly, keep the best of `trials` independent repetitions.
//! * [`solve_poly`] relaxes a homogeneous polynomial to its super-symmetric
//!   form, runs [`solve_form`], and recombines the `d` factors with the best
//!   sign pattern.
//! * [`best_rank_one`] reads a rank-one approximation off [`solve_form`].
//!
//! Trial `t` always draws from `RandomSource::new(seed, t)`, so the best of
//! the first `k` trials does not depend on `trials` or on thread scheduling.

use rayon::prelude::*;

use crate::error::{dim_mismatch, Error, Result};
use crate::forms::{signed_sum, signs_from_mask, MultilinearForm, PolyProblem, MAX_LINKAGE_DEGREE};
use crate::linalg::{outer_product, real_block, CQMatrix, CQTensor, CQVector};
use crate::sampling::{sample_sphere, RandomSource};

/// Norm below which a recombined vector is treated as zero.
pub const DEGENERATE_NORM: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct BilinearSolution {
    pub x: CQVector,
    pub y: CQVector,
    /// `Re(xᵀ A y)`, the spectral norm of the real block embedding.
    pub value: f64,
    /// `A` was zero; `(x, y)` are arbitrary unit vectors.
    pub degenerate: bool,
}

/// Exact maximizer of `Re(xᵀ A y)` over `‖x‖ = ‖y‖ = 1`.
pub fn solve_bilinear(a: &CQMatrix) -> Result<BilinearSolution> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let block = real_block(a);
    let t = block.dominant_singular_triplet()?;
    Ok(BilinearSolution {
        x: CQVector::from_vec_real(&t.left)?,
        y: CQVector::from_vec_real(&t.right)?,
        value: t.sigma,
        degenerate: t.degenerate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// One unit vector per slot for forms; a single unit vector for polynomials.
    pub solution: Vec<CQVector>,
    /// `Re F` or `Re H` re-evaluated at `solution`.
    pub objective: f64,
    pub trials: u64,
    pub best_trial: u64,
    pub seed: u64,
    /// Worst-case ratio formula, for reporting only.
    pub theoretical_ratio: Option<f64>,
    pub upper_bound: Option<f64>,
    pub degenerate: bool,
    /// Polynomial solves: the relaxed factors `x̂¹ … x̂^d`.
    pub relaxation: Vec<CQVector>,
    /// Polynomial solves: the chosen sign pattern `β`.
    pub signs: Vec<i8>,
}

impl SolveReport {
    fn new(solution: Vec<CQVector>, objective: f64, seed: u64) -> Self {
        SolveReport {
            solution,
            objective,
            trials: 1,
            best_trial: 0,
            seed,
            theoretical_ratio: None,
            upper_bound: None,
            degenerate: false,
            relaxation: Vec::new(),
            signs: Vec::new(),
        }
    }

    /// `objective / upper_bound`, when a bound is attached.
    pub fn ratio_to_upper_bound(&self) -> Option<f64> {
        self.upper_bound.map(|u| self.objective / u)
    }
}

/// Which slots are sampled and which two are solved exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPlan {
    pub sampled: Vec<usize>,
    pub free: (usize, usize),
}

impl SlotPlan {
    /// Samples the `d - 2` smallest slots; among equal sizes the later slots
    /// stay free. Requires `d ≥ 2`.
    pub fn for_dims(dims: &[usize]) -> SlotPlan {
        let mut order: Vec<usize> = (0..dims.len()).collect();
        order.sort_by_key(|&k| (dims[k], k));
        let (a, b) = (order[dims.len() - 2], order[dims.len() - 1]);
        let mut sampled = order[..dims.len() - 2].to_vec();
        sampled.sort_unstable();
        SlotPlan {
            sampled,
            free: (a.min(b), a.max(b)),
        }
    }
}

struct Trial {
    objective: f64,
    vectors: Vec<CQVector>,
    degenerate: bool,
}

fn run_trial(form: &MultilinearForm, plan: &SlotPlan, seed: u64, t: u64) -> Result<Trial> {
    let d = form.order();
    let mut src = RandomSource::new(seed, t);
    let mut vectors: Vec<Option<CQVector>> = vec![None; d];
    for &k in &plan.sampled {
        vectors[k] = Some(sample_sphere(form.dims()[k], &mut src)?);
    }
    let slots: Vec<Option<&CQVector>> = vectors.iter().map(Option::as_ref).collect();
    let a = form.partial(&slots)?.into_matrix()?;
    let sol = solve_bilinear(&a)?;
    vectors[plan.free.0] = Some(sol.x);
    vectors[plan.free.1] = Some(sol.y);
    Ok(Trial {
        objective: sol.value,
        vectors: vectors.into_iter().map(|v| v.expect("every slot filled")).collect(),
        degenerate: sol.degenerate,
    })
}

fn check_form_args(form: &MultilinearForm, trials: u64) -> Result<()> {
    if form.order() < 2 {
        return Err(Error::InvalidArgument(format!(
            "form order must be >= 2, got {}",
            form.order()
        )));
    }
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok(())
}

/// Objective of every trial `0..trials`, in trial order. Order-2 forms have
/// a single exact trial.
pub fn solve_form_trace(form: &MultilinearForm, trials: u64, seed: u64) -> Result<Vec<f64>> {
    check_form_args(form, trials)?;
    let plan = SlotPlan::for_dims(form.dims());
    let trials = if form.order() == 2 { 1 } else { trials };
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(form, &plan, seed, t).map(|tr| tr.objective))
        .collect()
}

/// Index of the largest value; the lowest index wins ties.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Randomized maximization of `Re F(x¹, …, x^d)` over unit spheres.
pub fn solve_form(form: &MultilinearForm, trials: u64, seed: u64) -> Result<SolveReport> {
    let trace = solve_form_trace(form, trials, seed)?;
    let best = argmax(&trace) as u64;
    let plan = SlotPlan::for_dims(form.dims());
    let trial = run_trial(form, &plan, seed, best)?;
    let objective = form.eval_re(&trial.vectors)?;
    let mut report = SolveReport::new(trial.vectors, objective, seed);
    report.trials = trace.len() as u64;
    report.best_trial = best;
    report.degenerate = trial.degenerate;
    Ok(report)
}

/// Randomized maximization of `Re H(x)` over the unit sphere via the
/// multilinear relaxation.
///
/// Odd degree: the sign pattern `β` maximizing
/// `Re(Πβᵢ · H((1/d) Σ βₖ x̂ᵏ))` is found by enumeration, and the better of
/// `±x̂/‖x̂‖` is returned. Even degree: `β` ranges over patterns with
/// `Πβᵢ = 1` maximizing `Re H(Σ βₖ x̂ᵏ)`, and the normalized sum is returned.
/// If the recombined vector vanishes, the best single relaxed factor is
/// returned and the report is flagged degenerate.
pub fn solve_poly(poly: &PolyProblem, trials: u64, seed: u64) -> Result<SolveReport> {
    let d = poly.degree();
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "polynomial degree must be >= 2, got {d}"
        )));
    }
    if d > MAX_LINKAGE_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {d} exceeds sign enumeration limit {MAX_LINKAGE_DEGREE}"
        )));
    }
    let form = poly.symmetrize();
    let relaxed = solve_form(&form, trials, seed)?;
    let xs = &relaxed.solution;
    let h = |x: &CQVector| poly.eval_re(x);

    let odd = d % 2 == 1;
    let mut best: Option<(f64, u32)> = None;
    for mask in 0u32..(1u32 << d) {
        if !odd && mask.count_ones() % 2 == 1 {
            continue;
        }
        let signs = signs_from_mask(mask, d);
        let y = signed_sum(xs, &signs);
        let value = if odd {
            let prod: f64 = signs.iter().product();
            prod * h(&y.scale(1.0 / d as f64))?
        } else {
            h(&y)?
        };
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, mask));
        }
    }
    let (_, mask) = best.expect("at least one sign pattern");
    let signs = signs_from_mask(mask, d);
    let combined = signed_sum(xs, &signs).scale(if odd { 1.0 / d as f64 } else { 1.0 });

    let mut degenerate = relaxed.degenerate;
    let x = match combined.normalized(DEGENERATE_NORM) {
        Some(u) if odd => {
            let neg = -&u;
            if h(&neg)? > h(&u)? {
                neg
            } else {
                u
            }
        }
        Some(u) => u,
        None => {
            degenerate = true;
            let values = xs.iter().map(h).collect::<Result<Vec<f64>>>()?;
            xs[argmax(&values)].clone()
        }
    };

    let objective = h(&x)?;
    let mut report = SolveReport::new(vec![x], objective, seed);
    report.trials = relaxed.trials;
    report.best_trial = relaxed.best_trial;
    report.degenerate = degenerate;
    report.signs = signs.iter().map(|&s| s as i8).collect();
    report.relaxation = relaxed.solution;
    Ok(report)
}

/// Estimate of `min Re H` over the unit sphere: runs [`solve_poly`] on `-H`
/// and negates. Since the sphere result is a feasible value, this is an
/// upper estimate of the true minimum.
pub fn estimate_min(poly: &PolyProblem, trials: u64, seed: u64) -> Result<f64> {
    Ok(-solve_poly(&poly.neg(), trials, seed)?.objective)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankOneApprox {
    /// `Re F(x¹, …, x^d)` at the unit factors, made nonnegative.
    pub lambda: f64,
    pub factors: Vec<CQVector>,
    /// `sqrt(max(0, ‖T‖² − λ²))`.
    pub residual: f64,
    /// `‖λ · x¹ ⊗ … ⊗ x^d − T‖`, computed directly.
    pub direct_residual: f64,
    pub report: SolveReport,
}

impl RankOneApprox {
    /// `|residual − direct_residual|`; zero exactly when the closed-form
    /// residual describes the returned approximation.
    pub fn identity_gap(&self) -> f64 {
        (self.residual - self.direct_residual).abs()
    }
}

/// Rank-one approximation `λ · x¹ ⊗ … ⊗ x^d` of a nonzero tensor, with unit
/// factors taken from [`solve_form`] and `λ = Re F(x¹, …, x^d)`.
///
/// Both the closed-form residual `sqrt(‖T‖² − λ²)` and the direct residual
/// are returned. They agree when the factors are real (or, generally, when
/// `‖x¹ ⊗ … ⊗ x^d‖ = 1` and `T • (x¹ ⊗ … ⊗ x^d) = λ`). Commutative quaternion
/// outer products of unit vectors need not have unit norm, so in general the
/// two differ; see [`RankOneApprox::identity_gap`].
pub fn best_rank_one(tensor: &CQTensor, trials: u64, seed: u64) -> Result<RankOneApprox> {
    if tensor.is_zero() {
        return Err(Error::ZeroInput("tensor for rank-one approximation"));
    }
    let form = MultilinearForm::new(tensor.clone())?;
    let report = solve_form(&form, trials, seed)?;
    let mut factors = report.solution.clone();
    let mut lambda = form.eval_re(&factors)?;
    if lambda < 0.0 {
        factors[0] = -&factors[0];
        lambda = -lambda;
    }
    let norm_sq = tensor.norm().powi(2);
    let residual = (norm_sq - lambda * lambda).max(0.0).sqrt();
    let approx = outer_product(&factors)?.scale(lambda);
    let direct_residual = approx.sub(tensor)?.norm();
    Ok(RankOneApprox {
        lambda,
        factors,
        residual,
        direct_residual,
        report,
    })
}

fn check_gamma(gamma: f64, n: usize) -> Result<()> {
    let limit = n as f64 / (n as f64).ln();
    if !(gamma > 0.0 && gamma < limit) {
        return Err(Error::InvalidArgument(format!(
            "gamma {gamma} outside (0, {limit}) for n = {n}"
        )));
    }
    Ok(())
}

/// `γ^((d−2)/2) · Π_{k ≤ d−2} sqrt(ln n_k / n_k)` over the `d − 2` smallest
/// dimensions; requires every dimension `≥ 2` and `γ ∈ (0, n₁ / ln n₁)`.
pub fn theoretical_ratio(dims: &[usize], gamma: f64) -> Result<f64> {
    let d = dims.len();
    if d < 2 {
        return Err(dim_mismatch("at least 2 dimensions", d));
    }
    if let Some(&n) = dims.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!(
            "every dimension must be >= 2, got {n}"
        )));
    }
    let mut sorted = dims.to_vec();
    sorted.sort_unstable();
    check_gamma(gamma, sorted[0])?;
    let prod: f64 = sorted[..d - 2]
        .iter()
        .map(|&n| ((n as f64).ln() / n as f64).sqrt())
        .product();
    Ok(gamma.powf((d as f64 - 2.0) / 2.0) * prod)
}

/// `d^(−d) · d! · (γ ln n / n)^((d−2)/2)`.
pub fn tau_p(d: usize, n: usize, gamma: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree must be >= 2, got {d}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
    }
    check_gamma(gamma, n)?;
    let df = d as f64;
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let nf = n as f64;
    Ok(df.powf(-df) * fact * (gamma * nf.ln() / nf).powf((df - 2.0) / 2.0))
}
