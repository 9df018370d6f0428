//! Fixtures shared by the solver benchmarks.

use cqopt::sampling::sample_qnormal;
use cqopt::{CQMatrix, CQTensor, CQuat, MultilinearForm, PolyProblem, RandomSource};

pub fn random_matrix(m: usize, n: usize, seed: u64) -> CQMatrix {
    let mut src = RandomSource::new(seed, 0);
    CQMatrix::from_fn(m, n, |_, _| {
        CQuat::new(src.normal(), src.normal(), src.normal(), src.normal())
    })
}

pub fn random_form(dims: &[usize], seed: u64) -> MultilinearForm {
    let mut src = RandomSource::new(seed, 0);
    let t = CQTensor::from_fn(dims, |_| CQuat::new(src.normal(), src.normal(), src.normal(), src.normal()));
    MultilinearForm::new(t).expect("dims are nonzero")
}

/// Dense random polynomial: one term per sorted index tuple.
pub fn random_poly(degree: usize, dim: usize, seed: u64) -> PolyProblem {
    let mut src = RandomSource::new(seed, 0);
    let mut p = PolyProblem::new(degree, dim).expect("degree and dim are nonzero");
    let mut idx = vec![0usize; degree];
    loop {
        let q = sample_qnormal(1, &mut src).expect("dim 1")[0];
        p.add_term(&idx, q).expect("index in range");
        // next nondecreasing tuple
        let Some(pos) = idx.iter().rposition(|&i| i + 1 < dim) else { break };
        let v = idx[pos] + 1;
        idx[pos..].iter_mut().for_each(|i| *i = v);
    }
    p
}
