//! Dense real matrices and the dominant singular triplet.

use crate::error::{dim_mismatch, Error, Result};

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dim_mismatch(rows * cols, data.len()));
        }
        Ok(RealMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RealMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// `A v`
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        self.data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| dot(row, v))
            .collect()
    }

    /// `Aᵀ u`
    pub fn tr_mul_vec(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &ur) in u.iter().enumerate() {
            if ur == 0.0 {
                continue;
            }
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for (o, &a) in out.iter_mut().zip(row) {
                *o += ur * a;
            }
        }
        out
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.cols != other.rows {
            return Err(dim_mismatch(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let orow = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `Aᵀ A`
    pub fn gram(&self) -> RealMatrix {
        let n = self.cols;
        let mut g = RealMatrix::zeros(n, n);
        for row in self.data.chunks_exact(n.max(1)).take(self.rows) {
            for i in 0..n {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for (g_ij, &r_j) in g.data[i * n + i..(i + 1) * n].iter_mut().zip(&row[i..]) {
                    *g_ij += ri * r_j;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.data[i * n + j] = g.data[j * n + i];
            }
        }
        g
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `uᵀ A v`
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(u, &self.mul_vec(v))
    }

    /// Largest singular value with a unit left/right pair.
    pub fn dominant_singular_triplet(&self) -> Result<SingularTriplet> {
        dominant_singular_triplet(self)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `sigma = uᵀ A v` with `‖u‖ = ‖v‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularTriplet {
    pub sigma: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub iterations: usize,
    /// The matrix was identically zero; `left`/`right` are the first basis vectors.
    pub degenerate: bool,
}

/// Off-diagonal mass, relative to the Frobenius norm, below which the Jacobi
/// sweeps stop.
pub const SINGULAR_TOL: f64 = 1e-15;
/// Cap on the number of Jacobi sweeps.
pub const SINGULAR_MAX_ITER: usize = 100;

/// Top singular pair from the Gram matrix `G = AᵀA` (or `AAᵀ`, whichever is
/// smaller), diagonalized by cyclic Jacobi rotations. `v` is the eigenvector
/// of the largest diagonal entry (lowest index on ties) and the partner is
/// `A v / ‖A v‖`.
///
/// The sign is fixed so that the first nonzero entry of the left vector is
/// positive.
fn dominant_singular_triplet(a: &RealMatrix) -> Result<SingularTriplet> {
    let (m, n) = (a.rows, a.cols);
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if a.max_abs() == 0.0 {
        let mut left = vec![0.0; m];
        let mut right = vec![0.0; n];
        left[0] = 1.0;
        right[0] = 1.0;
        return Ok(SingularTriplet {
            sigma: 0.0,
            left,
            right,
            iterations: 0,
            degenerate: true,
        });
    }

    let transposed = m < n;
    let op = if transposed { a.transpose() } else { a.clone() };
    let (v, iterations) = top_eigenvector(op.gram())?;

    let (mut left, mut right) = if transposed {
        // v is a left vector of A
        let right = unit(&a.tr_mul_vec(&v));
        (unit(&a.mul_vec(&right)), right)
    } else {
        (unit(&a.mul_vec(&v)), v)
    };
    if let Some(&first) = left.iter().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            left.iter_mut().for_each(|x| *x = -*x);
            right.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let sigma = a.bilinear(&left, &right);
    Ok(SingularTriplet {
        sigma,
        left,
        right,
        iterations,
        degenerate: false,
    })
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Eigenvector of the largest eigenvalue of a symmetric matrix, with the
/// number of sweeps used.
fn top_eigenvector(mut g: RealMatrix) -> Result<(Vec<f64>, usize)> {
    let k = g.rows;
    let mut vecs = RealMatrix::from_fn(k, k, |r, c| if r == c { 1.0 } else { 0.0 });
    let frob = norm(&g.data);
    let mut sweeps = 0;
    loop {
        let off = (0..k)
            .flat_map(|p| (p + 1..k).map(move |q| (p, q)))
            .map(|(p, q)| g.get(p, q).powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= SINGULAR_TOL * frob {
            break;
        }
        if sweeps >= SINGULAR_MAX_ITER {
            return Err(Error::NonConvergence {
                iterations: sweeps,
                residual: off / frob,
            });
        }
        sweeps += 1;
        for p in 0..k {
            for q in p + 1..k {
                let apq = g.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (g.get(q, q) - g.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut g, p, q, c, s);
                for r in 0..k {
                    let (vp, vq) = (vecs.get(r, p), vecs.get(r, q));
                    vecs.set(r, p, c * vp - s * vq);
                    vecs.set(r, q, s * vp + c * vq);
                }
            }
        }
    }
    let mut top = 0;
    for i in 1..k {
        if g.get(i, i) > g.get(top, top) {
            top = i;
        }
    }
    Ok(((0..k).map(|r| vecs.get(r, top)).collect(), sweeps))
}

/// `G ← Jᵀ G J` for the rotation `J` in the `(p, q)` plane that zeroes `G[p][q]`.
fn rotate(g: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    let k = g.rows;
    for r in 0..k {
        let (gp, gq) = (g.get(r, p), g.get(r, q));
        g.set(r, p, c * gp - s * gq);
        g.set(r, q, s * gp + c * gq);
    }
    for r in 0..k {
        let (gp, gq) = (g.get(p, r), g.get(q, r));
        g.set(p, r, c * gp - s * gq);
        g.set(q, r, s * gp + c * gq);
    }
    g.set(p, q, 0.0);
    g.set(q, p, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn oracle_sigma(a: &RealMatrix) -> f64 {
        let m = DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
        m.singular_values().max()
    }

    fn check(a: &RealMatrix) -> SingularTriplet {
        let t = a.dominant_singular_triplet().unwrap();
        let expect = oracle_sigma(a);
        assert!(
            (t.sigma - expect).abs() <= 1e-10 * expect.max(1.0),
            "sigma {} vs oracle {}",
            t.sigma,
            expect
        );
        assert!((norm(&t.left) - 1.0).abs() <= 1e-12);
        assert!((norm(&t.right) - 1.0).abs() <= 1e-12);
        assert!((a.bilinear(&t.left, &t.right) - t.sigma).abs() <= 1e-12 * t.sigma.max(1.0));
        t
    }

    #[test]
    fn diagonal_with_signs() {
        let a = RealMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                [1.0, -1.0, 1.0, -1.0][r]
            } else {
                0.0
            }
        });
        let t = check(&a);
        assert!((t.sigma - 1.0).abs() < 1e-14);
    }

    #[test]
    fn all_ones_rectangular() {
        for (m, n) in [(1, 1), (2, 3), (5, 2), (4, 4)] {
            let a = RealMatrix::from_fn(m, n, |_, _| 1.0);
            let t = check(&a);
            assert!((t.sigma - ((m * n) as f64).sqrt()).abs() < 1e-12);
            assert!(t.left[0] > 0.0);
        }
    }

    #[test]
    fn start_vector_orthogonal_to_top_space() {
        // Top right singular vector (1,-1)/√2 is orthogonal to the all-ones start.
        let a = RealMatrix::from_row_major(2, 2, vec![2.0, -2.0, 0.5, 0.5]).unwrap();
        let t = check(&a);
        assert!((t.sigma - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let t = RealMatrix::zeros(3, 2).dominant_singular_triplet().unwrap();
        assert!(t.degenerate);
        assert_eq!(t.sigma, 0.0);
        assert_eq!(norm(&t.left), 1.0);
    }

    #[test]
    fn random_and_near_degenerate_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let m = rng.random_range(1..=12);
            let n = rng.random_range(1..=12);
            let mut a = RealMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
            if trial % 3 == 0 {
                // Build U diag(1, 1 - eps, ...) Vᵀ-like structure by stacking two
                // almost equal rank-one terms with orthogonal supports.
                let eps = 10f64.powi(-rng.random_range(3..10));
                a = RealMatrix::zeros(m.max(2), n.max(2));
                a.set(0, 0, 1.0);
                a.set(1, 1, 1.0 - eps);
            }
            check(&a);
        }
    }
}
