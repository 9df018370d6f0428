//! Multilinear forms, homogeneous polynomials and the maps between them.
//!
//! Polynomial indices are 0-based in this API; the text file format in
//! [`crate::io`] uses 1-based indices.

use std::collections::BTreeMap;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{CQTensor, CQVector};
use crate::quat::CQuat;

/// `F(x¹, …, x^d) = Σ F_{i₁…i_d} x¹_{i₁} ⋯ x^d_{i_d}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    tensor: CQTensor,
}

impl MultilinearForm {
    pub fn new(tensor: CQTensor) -> Result<Self> {
        if tensor.order() == 0 || tensor.dims().contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "form needs order >= 1 and nonzero dims, got {:?}",
                tensor.dims()
            )));
        }
        Ok(MultilinearForm { tensor })
    }

    pub fn tensor(&self) -> &CQTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> CQTensor {
        self.tensor
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }

    pub fn dims(&self) -> &[usize] {
        self.tensor.dims()
    }

    /// Full contraction against one vector per slot.
    pub fn eval(&self, xs: &[CQVector]) -> Result<CQuat> {
        if xs.len() != self.order() {
            return Err(dim_mismatch(
                format!("{} vectors", self.order()),
                xs.len(),
            ));
        }
        let slots: Vec<Option<&CQVector>> = xs.iter().map(Some).collect();
        Ok(self.partial(&slots)?.scalar_value().expect("all slots contracted"))
    }

    /// `Re F(x¹, …, x^d)`
    pub fn eval_re(&self, xs: &[CQVector]) -> Result<f64> {
        Ok(self.eval(xs)?.re())
    }

    /// Contracts every slot given as `Some`, leaving the `None` slots free in
    /// their original order.
    pub fn partial(&self, slots: &[Option<&CQVector>]) -> Result<CQTensor> {
        if slots.len() != self.order() {
            return Err(dim_mismatch(
                format!("{} slots", self.order()),
                slots.len(),
            ));
        }
        let mut t = self.tensor.clone();
        // Highest slot first so lower slot numbers stay valid.
        for (k, x) in slots.iter().enumerate().rev() {
            if let Some(x) = x {
                t = t.contract_slot(k, x)?;
            }
        }
        Ok(t)
    }

    /// The vector `v` with `vᵀ y = F(…, y, …)` for `y` in `free_slot`;
    /// `fixed` holds the other `d - 1` vectors in slot order.
    pub fn contract(&self, fixed: &[CQVector], free_slot: usize) -> Result<CQVector> {
        if free_slot >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "free slot {free_slot} out of range for order {}",
                self.order()
            )));
        }
        if fixed.len() + 1 != self.order() {
            return Err(dim_mismatch(
                format!("{} fixed vectors", self.order() - 1),
                fixed.len(),
            ));
        }
        let mut it = fixed.iter();
        let slots: Vec<Option<&CQVector>> = (0..self.order())
            .map(|k| if k == free_slot { None } else { it.next() })
            .collect();
        self.partial(&slots)?.into_vector()
    }

    /// Entries invariant under every index permutation, within `tol`.
    pub fn is_super_symmetric(&self, tol: f64) -> bool {
        let dims = self.dims();
        if dims.iter().any(|&n| n != dims[0]) {
            return false;
        }
        self.tensor.indexed().all(|(idx, q)| {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            self.tensor.get(&sorted).max_abs_diff(q) <= tol
        })
    }
}

/// Homogeneous polynomial `H(x) = Σ_{i₁≤…≤i_d} a_{i₁…i_d} x_{i₁} ⋯ x_{i_d}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyProblem {
    degree: usize,
    dim: usize,
    coeffs: BTreeMap<Vec<usize>, CQuat>,
}

impl PolyProblem {
    pub fn new(degree: usize, dim: usize) -> Result<Self> {
        if degree == 0 || dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "polynomial needs degree >= 1 and dim >= 1, got degree {degree}, dim {dim}"
            )));
        }
        Ok(PolyProblem {
            degree,
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `a · x_{i₁} ⋯ x_{i_d}`. The index tuple is sorted before
    /// insertion and repeated monomials accumulate.
    pub fn add_term(&mut self, indices: &[usize], a: CQuat) -> Result<()> {
        if indices.len() != self.degree {
            return Err(dim_mismatch(
                format!("{} indices", self.degree),
                indices.len(),
            ));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "index {bad} out of range for dim {}",
                self.dim
            )));
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        *self.coeffs.entry(key).or_insert(CQuat::ZERO) += a;
        Ok(())
    }

    pub fn with_term(mut self, indices: &[usize], a: CQuat) -> Result<Self> {
        self.add_term(indices, a)?;
        Ok(self)
    }

    pub fn coeff(&self, indices: &[usize]) -> CQuat {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).copied().unwrap_or(CQuat::ZERO)
    }

    /// Monomials in sorted-tuple order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], CQuat)> {
        self.coeffs.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|q| q.is_zero())
    }

    pub fn neg(&self) -> PolyProblem {
        PolyProblem {
            degree: self.degree,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(k, &v)| (k.clone(), -v)).collect(),
        }
    }

    /// Direct monomial evaluation.
    pub fn eval(&self, x: &CQVector) -> Result<CQuat> {
        if x.len() != self.dim {
            return Err(dim_mismatch(self.dim, x.len()));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(idx, &a)| idx.iter().fold(a, |acc, &i| acc * x[i]))
            .sum())
    }

    pub fn eval_re(&self, x: &CQVector) -> Result<f64> {
        Ok(self.eval(x)?.re())
    }

    /// Super-symmetric tensor whose diagonal form is this polynomial: every
    /// permutation of a monomial's index tuple gets `a / (number of distinct
    /// permutations)`.
    pub fn symmetrize(&self) -> MultilinearForm {
        let dims = vec![self.dim; self.degree];
        let mut t = CQTensor::zeros(&dims);
        for (idx, &a) in &self.coeffs {
            let perms = distinct_permutations(idx);
            let share = a.scale(1.0 / perms.len() as f64);
            for p in perms {
                t.set(&p, share);
            }
        }
        MultilinearForm { tensor: t }
    }
}

/// All distinct orderings of `sorted` (which must be nondecreasing), in
/// lexicographic order.
pub fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Largest degree accepted by [`linkage_check`]; it enumerates `2^d` sign
/// patterns.
pub const MAX_LINKAGE_DEGREE: usize = 20;

/// Both sides of the sign-averaging identity
/// `E[ξ₁⋯ξ_d · H(Σ ξ_k x^k)] = d! · F(x¹, …, x^d)` for a super-symmetric `F`
/// and i.i.d. symmetric signs `ξ`. The expectation is the exact average over
/// all `2^d` sign vectors.
pub fn linkage_check(form: &MultilinearForm, xs: &[CQVector]) -> Result<(CQuat, CQuat)> {
    let d = form.order();
    if d > MAX_LINKAGE_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {d} exceeds enumeration limit {MAX_LINKAGE_DEGREE}"
        )));
    }
    if xs.len() != d {
        return Err(dim_mismatch(format!("{d} vectors"), xs.len()));
    }
    let n = form.dims()[0];
    if let Some(x) = xs.iter().find(|x| x.len() != n) {
        return Err(dim_mismatch(n, x.len()));
    }
    let mut total = CQuat::ZERO;
    for mask in 0u32..(1u32 << d) {
        let signs = signs_from_mask(mask, d);
        let y = signed_sum(xs, &signs);
        let h = form.eval(&vec![y; d])?;
        let prod: f64 = signs.iter().product();
        total += h.scale(prod);
    }
    let lhs = total.scale(1.0 / f64::from(1u32 << d));
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let rhs = form.eval(xs)?.scale(fact);
    Ok((lhs, rhs))
}

/// Bit `k` of `mask` set means `ξ_k = -1`.
pub(crate) fn signs_from_mask(mask: u32, d: usize) -> Vec<f64> {
    (0..d)
        .map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 })
        .collect()
}

/// `Σ_k s_k x^k`
pub(crate) fn signed_sum(xs: &[CQVector], signs: &[f64]) -> CQVector {
    let mut y = CQVector::zeros(xs[0].len());
    for (x, &s) in xs.iter().zip(signs) {
        for i in 0..y.len() {
            y[i] += x[i].scale(s);
        }
    }
    y
}

/// Polynomial in the stacked variable `x = (x¹; …; x^d)` of length `Σ n_k`
/// with `H(x) = F(x¹, …, x^d)`.
pub fn lift_to_poly(form: &MultilinearForm) -> PolyProblem {
    let dims = form.dims();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total: usize = dims.iter().sum();
    let mut p = PolyProblem::new(form.order(), total).expect("form has order >= 1");
    for (idx, q) in form.tensor().indexed() {
        if q.is_zero() {
            continue;
        }
        let stacked: Vec<usize> = idx.iter().zip(&offsets).map(|(i, o)| i + o).collect();
        p.add_term(&stacked, q).expect("stacked indices are in range");
    }
    p
}

/// Splits a stacked vector into consecutive blocks of the given lengths.
pub fn split_blocks(x: &CQVector, dims: &[usize]) -> Result<Vec<CQVector>> {
    let total: usize = dims.iter().sum();
    if x.len() != total {
        return Err(dim_mismatch(total, x.len()));
    }
    let mut out = Vec::with_capacity(dims.len());
    let mut start = 0;
    for &n in dims {
        out.push(CQVector::new(x.as_slice()[start..start + n].to_vec()));
        start += n;
    }
    Ok(out)
}

pub fn stack_blocks(blocks: &[CQVector]) -> CQVector {
    blocks.iter().flat_map(|b| b.iter().copied()).collect()
}
