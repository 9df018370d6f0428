//! Seeded random sources for the randomized solvers and Monte Carlo checks.
//!
//! A [`RandomSource`] is a ChaCha8 stream keyed by a 64-bit seed and selected
//! by a 64-bit stream id, so `(seed, stream)` alone determines the draws no
//! matter how work is scheduled across threads. Normal variates use the
//! Ziggurat transform from `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::CQVector;
use crate::quat::CQuat;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn sign(&mut self) -> i8 {
        if self.rng.random::<bool>() {
            1
        } else {
            -1
        }
    }
}

/// Independent seed for run `run` of an experiment (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, run: u64) -> u64 {
    let mut z = seed ^ run.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `η ~ QN(0, 4Iₙ)`: the four real component vectors are i.i.d. `N(0, Iₙ)`.
pub fn sample_qnormal(n: usize, src: &mut RandomSource) -> Result<CQVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    Ok((0..n)
        .map(|_| CQuat::new(src.normal(), src.normal(), src.normal(), src.normal()))
        .collect())
}

/// Uniform draw on the quaternion unit sphere `{x ∈ ℍⁿ : ‖x‖ = 1}`, as `η/‖η‖`.
pub fn sample_sphere(n: usize, src: &mut RandomSource) -> Result<CQVector> {
    loop {
        let eta = sample_qnormal(n, src)?;
        if let Some(u) = eta.normalized(1e-300) {
            return Ok(u);
        }
    }
}

/// `d` i.i.d. symmetric Bernoulli signs.
pub fn sample_signs(d: usize, src: &mut RandomSource) -> Result<Vec<i8>> {
    if d == 0 {
        return Err(Error::InvalidArgument("sign count must be >= 1".into()));
    }
    Ok((0..d).map(|_| src.sign()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const N_DRAWS: usize = 100_000;

    #[test]
    fn qnormal_chi_square_mean() {
        let n = 2;
        let mut src = RandomSource::new(1, 0);
        let mean = (0..N_DRAWS)
            .map(|_| sample_qnormal(n, &mut src).unwrap().norm_sqr())
            .sum::<f64>()
            / N_DRAWS as f64;
        let df = 4.0 * n as f64;
        let se = (2.0 * df / N_DRAWS as f64).sqrt();
        assert!((mean - df).abs() <= 3.0 * se, "mean {mean}");
    }

    #[test]
    fn qnormal_component_means() {
        let mut src = RandomSource::new(2, 0);
        let mut sums = [0.0; 4];
        for _ in 0..N_DRAWS {
            let q = sample_qnormal(1, &mut src).unwrap()[0].to_array();
            for c in 0..4 {
                sums[c] += q[c];
            }
        }
        let band = 4.0 / (N_DRAWS as f64).sqrt();
        for s in sums {
            assert!((s / N_DRAWS as f64).abs() <= band);
        }
    }

    #[test]
    fn determinism_per_stream() {
        let a = sample_qnormal(5, &mut RandomSource::new(9, 3)).unwrap();
        let b = sample_qnormal(5, &mut RandomSource::new(9, 3)).unwrap();
        let c = sample_qnormal(5, &mut RandomSource::new(9, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let s1 = sample_signs(64, &mut RandomSource::new(9, 3)).unwrap();
        let s2 = sample_signs(64, &mut RandomSource::new(9, 3)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn streams_are_independent_of_interleaving() {
        let mut a = RandomSource::new(5, 0);
        let mut b = RandomSource::new(5, 1);
        let interleaved: Vec<(f64, f64)> = (0..10).map(|_| (a.normal(), b.normal())).collect();
        let mut a2 = RandomSource::new(5, 0);
        let only_a: Vec<f64> = (0..10).map(|_| a2.normal()).collect();
        assert_eq!(interleaved.iter().map(|p| p.0).collect::<Vec<_>>(), only_a);
    }

    #[test]
    fn sphere_draws_are_unit() {
        let mut src = RandomSource::new(3, 0);
        for n in 1..6 {
            for _ in 0..200 {
                let x = sample_sphere(n, &mut src).unwrap();
                assert!((x.norm() - 1.0).abs() <= 1e-12);
            }
        }
        let x = sample_sphere(1, &mut src).unwrap();
        assert!((x[0].magnitude() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sphere_projection_has_zero_mean() {
        let mut src = RandomSource::new(4, 0);
        let a = CQVector::new(vec![CQuat::new(0.3, 0.1, -0.4, 0.2), CQuat::I, CQuat::J]);
        let vals: Vec<f64> = (0..N_DRAWS)
            .map(|_| a.dot(&sample_sphere(3, &mut src).unwrap()).unwrap().re())
            .collect();
        let mean = vals.iter().sum::<f64>() / N_DRAWS as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / N_DRAWS as f64;
        assert!(mean.abs() <= 4.0 * (var / N_DRAWS as f64).sqrt());
    }

    #[test]
    fn signs_are_balanced() {
        let mut src = RandomSource::new(6, 0);
        let s = sample_signs(N_DRAWS, &mut src).unwrap();
        assert!(s.iter().all(|&v| v == 1 || v == -1));
        let mean = s.iter().map(|&v| f64::from(v)).sum::<f64>() / N_DRAWS as f64;
        assert!(mean.abs() <= 4.0 / (N_DRAWS as f64).sqrt());
    }

    #[test]
    fn zero_dimension_rejected() {
        let mut src = RandomSource::new(0, 0);
        assert!(sample_qnormal(0, &mut src).is_err());
        assert!(sample_sphere(0, &mut src).is_err());
        assert!(sample_signs(0, &mut src).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|r| derive_seed(42, r)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
