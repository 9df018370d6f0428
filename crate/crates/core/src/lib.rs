//! Sphere-constrained optimization of homogeneous polynomials and multilinear
//! forms over commutative quaternions.
//!
//! The two-slot case is solved exactly through a real `4m×4n` embedding. Higher
//! orders use randomized sampling of all but the two largest slots, and
//! polynomials are handled through their symmetric multilinear relaxation
//! followed by a sign recombination of the relaxed factors.

pub mod error;
pub mod experiment;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod prob_lab;
pub mod quat;
pub mod real;
pub mod sampling;
pub mod solvers;

pub use error::{Error, Result};
pub use forms::{MultilinearForm, PolyProblem};
pub use linalg::{outer_product, re_bilinear, real_block, CQMatrix, CQTensor, CQVector, RealBlockMatrix};
pub use quat::CQuat;
pub use sampling::RandomSource;
pub use solvers::{best_rank_one, solve_bilinear, solve_form, solve_poly, RankOneApprox, SolveReport};
