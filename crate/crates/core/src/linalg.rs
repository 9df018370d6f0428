//! Vectors, matrices and dense tensors over [`CQuat`], plus the real block
//! embedding that turns `Re(xᵀ A y)` into an ordinary real bilinear form.

use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{dim_mismatch, Error, Result};
use crate::quat::CQuat;
use crate::real::{RealMatrix, SingularTriplet};

/// Column vector over the commutative quaternions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CQVector(Vec<CQuat>);

impl CQVector {
    pub fn new(entries: Vec<CQuat>) -> Self {
        CQVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        CQVector(vec![CQuat::ZERO; n])
    }

    /// Real vector of ones.
    pub fn ones(n: usize) -> Self {
        CQVector(vec![CQuat::ONE; n])
    }

    /// Standard basis vector `e_k` (0-based).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CQVector::zeros(n);
        v.0[k] = CQuat::ONE;
        v
    }

    pub fn from_reals(re: &[f64]) -> Self {
        CQVector(re.iter().map(|&w| CQuat::real(w)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[CQuat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CQuat> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<CQuat> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum()
    }

    /// `‖v‖ = sqrt(Σ |vᵢ|²)`
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> CQVector {
        CQVector(self.0.iter().map(|q| q.scale(s)).collect())
    }

    /// Entrywise product with a quaternion scalar.
    pub fn scale_q(&self, s: CQuat) -> CQVector {
        CQVector(self.0.iter().map(|&q| q * s).collect())
    }

    /// Unit vector in the same direction, or `None` when the norm is below `eps`.
    pub fn normalized(&self, eps: f64) -> Option<CQVector> {
        let n = self.norm();
        (n > eps).then(|| self.scale(1.0 / n))
    }

    /// Inner product `q • p = Re(qᴴ p) = Σₖ q_kᵀ p_k` over the four real parts.
    pub fn inner(&self, p: &CQVector) -> Result<f64> {
        self.check_len(p)?;
        Ok(self
            .0
            .iter()
            .zip(&p.0)
            .map(|(a, b)| a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z)
            .sum())
    }

    /// Plain transposed product `qᵀ p` (no conjugation).
    pub fn dot(&self, p: &CQVector) -> Result<CQuat> {
        self.check_len(p)?;
        Ok(self.0.iter().zip(&p.0).map(|(&a, &b)| a * b).sum())
    }

    /// Stacks the real component vectors as `(x₀; x₁; x₂; x₃)`.
    pub fn vec_real(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; 4 * n];
        for (i, q) in self.0.iter().enumerate() {
            out[i] = q.w;
            out[n + i] = q.x;
            out[2 * n + i] = q.y;
            out[3 * n + i] = q.z;
        }
        out
    }

    /// Inverse of [`CQVector::vec_real`].
    pub fn from_vec_real(v: &[f64]) -> Result<CQVector> {
        if !v.len().is_multiple_of(4) {
            return Err(dim_mismatch("a multiple of 4", v.len()));
        }
        let n = v.len() / 4;
        Ok(CQVector(
            (0..n)
                .map(|i| CQuat::new(v[i], v[n + i], v[2 * n + i], v[3 * n + i]))
                .collect(),
        ))
    }

    fn check_len(&self, p: &CQVector) -> Result<()> {
        if self.len() != p.len() {
            return Err(dim_mismatch(self.len(), p.len()));
        }
        Ok(())
    }
}

impl From<Vec<CQuat>> for CQVector {
    fn from(v: Vec<CQuat>) -> Self {
        CQVector(v)
    }
}

impl FromIterator<CQuat> for CQVector {
    fn from_iter<I: IntoIterator<Item = CQuat>>(iter: I) -> Self {
        CQVector(iter.into_iter().collect())
    }
}

impl Index<usize> for CQVector {
    type Output = CQuat;
    fn index(&self, i: usize) -> &CQuat {
        &self.0[i]
    }
}

impl IndexMut<usize> for CQVector {
    fn index_mut(&mut self, i: usize) -> &mut CQuat {
        &mut self.0[i]
    }
}

/// Panics on length mismatch.
impl Add for &CQVector {
    type Output = CQVector;
    fn add(self, o: &CQVector) -> CQVector {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        self.0.iter().zip(&o.0).map(|(&a, &b)| a + b).collect()
    }
}

/// Panics on length mismatch.
impl Sub for &CQVector {
    type Output = CQVector;
    fn sub(self, o: &CQVector) -> CQVector {
        assert_eq!(self.len(), o.len(), "vector length mismatch");
        self.0.iter().zip(&o.0).map(|(&a, &b)| a - b).collect()
    }
}

impl Neg for &CQVector {
    type Output = CQVector;
    fn neg(self) -> CQVector {
        self.0.iter().map(|&a| -a).collect()
    }
}

/// Row-major dense matrix over the commutative quaternions.
#[derive(Clone, Debug, PartialEq)]
pub struct CQMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CQuat>,
}

impl CQMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CQMatrix {
            rows,
            cols,
            data: vec![CQuat::ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CQuat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CQMatrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<CQuat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dim_mismatch(rows * cols, data.len()));
        }
        Ok(CQMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> CQuat {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, q: CQuat) {
        self.data[r * self.cols + c] = q;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    pub fn transpose(&self) -> CQMatrix {
        CQMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj_transpose(&self) -> CQMatrix {
        CQMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// `A y`
    pub fn mul_vec(&self, y: &CQVector) -> Result<CQVector> {
        if y.len() != self.cols {
            return Err(dim_mismatch(self.cols, y.len()));
        }
        Ok(self
            .data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(y.iter()).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Real component matrix `A_c` for `c ∈ {0, 1, 2, 3}`.
    pub fn component(&self, c: usize) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |r, k| self.get(r, k).to_array()[c])
    }
}

/// The `4m × 4n` real matrix `B` with
/// `Re(xᵀ A y) = vec_real(x)ᵀ · B · vec_real(y)`.
///
/// Block layout for `A = A₀ + A₁i + A₂j + A₃k`:
///
/// ```text
///  [ A₀  -A₁   A₂  -A₃ ]
///  [-A₁  -A₀  -A₃  -A₂ ]
///  [ A₂  -A₃   A₀  -A₁ ]
///  [-A₃  -A₂  -A₁  -A₀ ]
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct RealBlockMatrix {
    matrix: RealMatrix,
    rows: usize,
    cols: usize,
}

/// `(sign, component)` for each block of the embedding.
const BLOCK_PATTERN: [[(f64, usize); 4]; 4] = [
    [(1.0, 0), (-1.0, 1), (1.0, 2), (-1.0, 3)],
    [(-1.0, 1), (-1.0, 0), (-1.0, 3), (-1.0, 2)],
    [(1.0, 2), (-1.0, 3), (1.0, 0), (-1.0, 1)],
    [(-1.0, 3), (-1.0, 2), (-1.0, 1), (-1.0, 0)],
];

impl RealBlockMatrix {
    pub fn from_cq(a: &CQMatrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        let matrix = RealMatrix::from_fn(4 * m, 4 * n, |r, c| {
            let (sign, comp) = BLOCK_PATTERN[r / m][c / n];
            sign * a.get(r % m, c % n).to_array()[comp]
        });
        RealBlockMatrix {
            matrix,
            rows: m,
            cols: n,
        }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// Row count of the quaternion matrix it was built from.
    pub fn quaternion_rows(&self) -> usize {
        self.rows
    }

    pub fn quaternion_cols(&self) -> usize {
        self.cols
    }

    pub fn bilinear(&self, x: &CQVector, y: &CQVector) -> Result<f64> {
        if x.len() != self.rows || y.len() != self.cols {
            return Err(dim_mismatch(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", x.len(), y.len()),
            ));
        }
        Ok(self.matrix.bilinear(&x.vec_real(), &y.vec_real()))
    }

    pub fn dominant_singular_triplet(&self) -> Result<SingularTriplet> {
        self.matrix.dominant_singular_triplet()
    }
}

pub fn real_block(a: &CQMatrix) -> RealBlockMatrix {
    RealBlockMatrix::from_cq(a)
}

/// `Re(xᵀ A y)` in quaternion arithmetic (plain transpose, no conjugate).
pub fn re_bilinear(x: &CQVector, a: &CQMatrix, y: &CQVector) -> Result<f64> {
    if x.len() != a.rows {
        return Err(dim_mismatch(a.rows, x.len()));
    }
    Ok(x.dot(&a.mul_vec(y)?)?.re())
}

/// Dense order-`d` tensor over the commutative quaternions, row-major.
///
/// An order-0 tensor (empty `dims`) holds a single scalar; it only appears as
/// the result of contracting every slot.
#[derive(Clone, Debug, PartialEq)]
pub struct CQTensor {
    dims: Vec<usize>,
    data: Vec<CQuat>,
}

impl CQTensor {
    pub fn zeros(dims: &[usize]) -> Self {
        CQTensor {
            dims: dims.to_vec(),
            data: vec![CQuat::ZERO; dims.iter().product()],
        }
    }

    pub fn from_data(dims: &[usize], data: Vec<CQuat>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(dim_mismatch(len, data.len()));
        }
        Ok(CQTensor {
            dims: dims.to_vec(),
            data,
        })
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> CQuat) -> Self {
        let mut t = CQTensor::zeros(dims);
        let mut idx = vec![0; dims.len()];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            advance(&mut idx, dims);
        }
        t
    }

    /// Real tensor with every entry equal to one.
    pub fn ones(dims: &[usize]) -> Self {
        CQTensor::from_fn(dims, |_| CQuat::ONE)
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn as_slice(&self) -> &[CQuat] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, idx: &[usize]) -> CQuat {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], q: CQuat) {
        let o = self.offset(idx);
        self.data[o] = q;
    }

    /// Iterates `(multi-index, entry)` in row-major order.
    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, CQuat)> + '_ {
        let mut idx = vec![0; self.dims.len()];
        self.data.iter().map(move |&q| {
            let cur = idx.clone();
            advance(&mut idx, &self.dims);
            (cur, q)
        })
    }

    pub fn scale(&self, s: f64) -> CQTensor {
        CQTensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|q| q.scale(s)).collect(),
        }
    }

    pub fn sub(&self, other: &CQTensor) -> Result<CQTensor> {
        self.check_shape(other)?;
        Ok(CQTensor {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// `T • K = Σ_c ⟨T_c, K_c⟩`
    pub fn inner(&self, other: &CQTensor) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Contracts slot `slot` against `v`, returning a tensor of order `d - 1`.
    pub fn contract_slot(&self, slot: usize, v: &CQVector) -> Result<CQTensor> {
        if slot >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "slot {slot} out of range for order {}",
                self.order()
            )));
        }
        let n = self.dims[slot];
        if v.len() != n {
            return Err(dim_mismatch(format!("slot {slot} of length {n}"), v.len()));
        }
        let pre: usize = self.dims[..slot].iter().product();
        let post: usize = self.dims[slot + 1..].iter().product();
        let mut out = vec![CQuat::ZERO; pre * post];
        for a in 0..pre {
            let dst = &mut out[a * post..(a + 1) * post];
            for (i, &vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                let src = &self.data[(a * n + i) * post..(a * n + i + 1) * post];
                for (o, &t) in dst.iter_mut().zip(src) {
                    *o += t * vi;
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(slot);
        Ok(CQTensor { dims, data: out })
    }

    /// Value of an order-0 tensor.
    pub fn scalar_value(&self) -> Option<CQuat> {
        self.dims.is_empty().then(|| self.data[0])
    }

    pub fn into_vector(self) -> Result<CQVector> {
        if self.order() != 1 {
            return Err(dim_mismatch("order 1", format!("order {}", self.order())));
        }
        Ok(CQVector(self.data))
    }

    pub fn into_matrix(self) -> Result<CQMatrix> {
        if self.order() != 2 {
            return Err(dim_mismatch("order 2", format!("order {}", self.order())));
        }
        CQMatrix::from_row_major(self.dims[0], self.dims[1], self.data)
    }

    fn check_shape(&self, other: &CQTensor) -> Result<()> {
        if self.dims != other.dims {
            return Err(dim_mismatch(
                format!("{:?}", self.dims),
                format!("{:?}", other.dims),
            ));
        }
        Ok(())
    }
}

impl From<CQMatrix> for CQTensor {
    fn from(m: CQMatrix) -> Self {
        CQTensor {
            dims: vec![m.rows, m.cols],
            data: m.data,
        }
    }
}

impl From<CQVector> for CQTensor {
    fn from(v: CQVector) -> Self {
        CQTensor {
            dims: vec![v.len()],
            data: v.0,
        }
    }
}

/// Row-major odometer step; wraps to all zeros after the last index.
pub(crate) fn advance(idx: &mut [usize], dims: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return;
        }
        idx[k] = 0;
    }
}

/// `(x¹ ⊗ … ⊗ x^d)_{k₁…k_d} = x¹_{k₁} ⋯ x^d_{k_d}`.
pub fn outer_product(xs: &[CQVector]) -> Result<CQTensor> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("outer product of no vectors".into()));
    }
    let dims: Vec<usize> = xs.iter().map(CQVector::len).collect();
    Ok(CQTensor::from_fn(&dims, |idx| {
        idx.iter()
            .zip(xs)
            .fold(CQuat::ONE, |acc, (&i, x)| acc * x[i])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> CQuat {
        CQuat::new(w, x, y, z)
    }

    #[test]
    fn inner_product_examples() {
        let v = CQVector::new(vec![q(1.0, 1.0, 0.0, 0.0), CQuat::J]);
        assert_eq!(v.inner(&v).unwrap(), 3.0);
        let e1 = CQVector::basis(3, 0);
        let e2 = CQVector::basis(3, 1);
        assert_eq!(e1.inner(&e2).unwrap(), 0.0);
        assert!(e1.inner(&CQVector::zeros(2)).is_err());
    }

    #[test]
    fn re_bilinear_examples() {
        let one = CQVector::ones(1);
        let a1 = CQMatrix::from_fn(1, 1, |_, _| CQuat::ONE);
        assert_eq!(re_bilinear(&one, &a1, &one).unwrap(), 1.0);
        let i = CQVector::new(vec![CQuat::I]);
        assert_eq!(re_bilinear(&i, &a1, &i).unwrap(), -1.0);
        assert!(re_bilinear(&CQVector::ones(2), &a1, &one).is_err());
    }

    #[test]
    fn block_of_one_and_i() {
        let b = real_block(&CQMatrix::from_fn(1, 1, |_, _| CQuat::ONE));
        let expect = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(b.matrix().get(r, c), expect[r][c]);
            }
        }
        let b = real_block(&CQMatrix::from_fn(1, 1, |_, _| CQuat::I));
        let expect = [
            [0.0, -1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, -1.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(b.matrix().get(r, c), expect[r][c]);
            }
        }
    }

    #[test]
    fn block_of_real_ones_is_signed_block_diagonal() {
        let (m, n) = (2, 3);
        let b = real_block(&CQMatrix::from_fn(m, n, |_, _| CQuat::ONE));
        for r in 0..4 * m {
            for c in 0..4 * n {
                let expect = if r / m == c / n {
                    [1.0, -1.0, 1.0, -1.0][r / m]
                } else {
                    0.0
                };
                assert_eq!(b.matrix().get(r, c), expect);
            }
        }
    }

    #[test]
    fn vec_real_layout() {
        let x = CQVector::new(vec![q(1.0, 1.0, 0.0, 0.0)]);
        assert_eq!(x.vec_real(), vec![1.0, 1.0, 0.0, 0.0]);
        let x = CQVector::new(vec![q(1.0, 2.0, 3.0, 4.0), q(5.0, 6.0, 7.0, 8.0)]);
        assert_eq!(x.vec_real(), vec![1.0, 5.0, 2.0, 6.0, 3.0, 7.0, 4.0, 8.0]);
        assert_eq!(CQVector::from_vec_real(&x.vec_real()).unwrap(), x);
        assert!(CQVector::from_vec_real(&[1.0; 3]).is_err());
    }

    #[test]
    fn outer_product_examples() {
        let t = outer_product(&[
            CQVector::from_reals(&[1.0, 0.0]),
            CQVector::from_reals(&[0.0, 1.0]),
        ])
        .unwrap();
        assert_eq!(t.dims(), &[2, 2]);
        assert_eq!(t.get(&[0, 1]), CQuat::ONE);
        assert_eq!(t.as_slice().iter().filter(|q| !q.is_zero()).count(), 1);

        let t = outer_product(&[CQVector::new(vec![CQuat::I]), CQVector::new(vec![CQuat::J])])
            .unwrap();
        assert_eq!(t.get(&[0, 0]), CQuat::K);
        assert!(outer_product(&[]).is_err());
    }

    #[test]
    fn outer_product_norm_is_not_multiplicative() {
        // x = (1 + j)/√2 and y = (1 - j)/√2 are unit, but x ⊗ y = 0.
        let s = 0.5f64.sqrt();
        let x = CQVector::new(vec![q(s, 0.0, s, 0.0)]);
        let y = CQVector::new(vec![q(s, 0.0, -s, 0.0)]);
        let t = outer_product(&[x.clone(), y.clone()]).unwrap();
        assert!((x.norm() * y.norm() - 1.0).abs() < 1e-15);
        assert!(t.norm() < 1e-15);
    }

    #[test]
    fn tensor_norms() {
        assert!((CQTensor::ones(&[2, 2, 2]).norm() - 8f64.sqrt()).abs() < 1e-15);
        let mut t = CQTensor::zeros(&[2, 3]);
        t.set(&[1, 2], q(1.0, 1.0, 1.0, 1.0));
        assert_eq!(t.norm(), 2.0);
        assert!(t.inner(&CQTensor::zeros(&[3, 2])).is_err());
    }

    #[test]
    fn contract_slot_shapes() {
        let t = CQTensor::ones(&[2, 3, 4]);
        let c = t.contract_slot(1, &CQVector::ones(3)).unwrap();
        assert_eq!(c.dims(), &[2, 4]);
        assert!(c.as_slice().iter().all(|&v| v == CQuat::real(3.0)));
        assert!(t.contract_slot(3, &CQVector::ones(3)).is_err());
        assert!(t.contract_slot(0, &CQVector::ones(3)).is_err());
    }

    #[test]
    fn conj_transpose_involution() {
        let a = CQMatrix::from_fn(2, 3, |r, c| q(r as f64, c as f64, 1.0, -2.0));
        assert_eq!(a.conj_transpose().conj_transpose(), a);
        assert_eq!(a.conj_transpose().get(2, 1), a.get(1, 2).conj());
    }

    fn cq() -> impl Strategy<Value = CQuat> {
        prop::array::uniform4(-1.0f64..1.0).prop_map(CQuat::from_array)
    }

    fn cvec(n: usize) -> impl Strategy<Value = CQVector> {
        prop::collection::vec(cq(), n).prop_map(CQVector::new)
    }

    fn bilinear_case() -> impl Strategy<Value = (CQVector, CQMatrix, CQVector)> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| {
            (
                cvec(m),
                prop::collection::vec(cq(), m * n)
                    .prop_map(move |d| CQMatrix::from_row_major(m, n, d).unwrap()),
                cvec(n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn block_embedding_identity((x, a, y) in bilinear_case()) {
            let direct = re_bilinear(&x, &a, &y).unwrap();
            let embedded = real_block(&a).bilinear(&x, &y).unwrap();
            prop_assert!((direct - embedded).abs() <= 1e-10);
        }

        #[test]
        fn inner_is_re_of_conj_transpose(x in cvec(4), y in cvec(4)) {
            let brute: f64 = x.iter().zip(y.iter()).map(|(&a, &b)| (a.conj() * b).re()).sum();
            prop_assert!((x.inner(&y).unwrap() - brute).abs() <= 1e-12);
        }

        #[test]
        fn cauchy_schwarz_surrogate(x in cvec(3), y in cvec(3)) {
            prop_assert!(x.dot(&y).unwrap().re() <= x.norm() * y.norm() + 1e-10);
        }

        #[test]
        fn vec_real_preserves_norm(x in cvec(5)) {
            let v = x.vec_real();
            prop_assert!((v.iter().map(|a| a * a).sum::<f64>().sqrt() - x.norm()).abs() <= 1e-12);
            prop_assert_eq!(CQVector::from_vec_real(&v).unwrap(), x);
        }

        #[test]
        fn tensor_norm_matches_components(data in prop::collection::vec(cq(), 12)) {
            let t = CQTensor::from_data(&[2, 3, 2], data.clone()).unwrap();
            let sumsq: f64 = data.iter().flat_map(|q| q.to_array()).map(|c| c * c).sum();
            prop_assert!((t.norm().powi(2) - sumsq).abs() <= 1e-12);
            prop_assert!((t.inner(&t).unwrap() - t.norm().powi(2)).abs() <= 1e-12);
        }
    }
}
