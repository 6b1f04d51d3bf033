//! Sparse recovery for `y = A x + z`.

mod bounds;
mod cosamp;
mod fista;
mod lsqr;
mod omp;
mod operator;

pub use bounds::{pilot_count_bound, pilot_count_bound_f, sparsity_estimate};
pub use cosamp::cosamp;
pub use fista::fista_lasso;
pub use lsqr::{lsqr, LsqrOutcome};
pub use omp::omp;
pub use operator::{adjoint_mismatch, spectral_norm_sqr, ColumnSubset, DenseOperator, LinearOperator, PartialDft};

use crate::C64;

/// Output of a sparse solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSolution {
    pub x_hat: Vec<C64>,
    /// Sorted indices of the nonzero entries.
    pub support: Vec<usize>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// OMP met a column dependent on the current selection and skipped it.
    pub rank_deficient: bool,
    /// Residual norm (OMP, CoSaMP) or objective (FISTA) after each step.
    pub residual_history: Vec<f64>,
}

/// Solver choice with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverSpec {
    Omp { sparsity: usize },
    Cosamp { sparsity: usize, max_iter: usize, lsqr_iter: usize },
    /// `lambda = lambda_rel * max_j |(A^H y)_j|`.
    Lasso { lambda_rel: f64, max_iter: usize, tol: f64 },
}

impl SolverSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SolverSpec::Omp { .. } => "omp",
            SolverSpec::Cosamp { .. } => "cosamp",
            SolverSpec::Lasso { .. } => "lasso",
        }
    }

    pub fn solve<A: LinearOperator + ?Sized>(&self, a: &A, y: &[C64]) -> crate::Result<SparseSolution> {
        match *self {
            SolverSpec::Omp { sparsity } => omp(a, y, sparsity.min(a.rows())),
            SolverSpec::Cosamp {
                sparsity,
                max_iter,
                lsqr_iter,
            } => cosamp(a, y, sparsity.min(a.rows()), max_iter, lsqr_iter),
            SolverSpec::Lasso {
                lambda_rel,
                max_iter,
                tol,
            } => {
                let mut c = vec![C64::new(0.0, 0.0); a.cols()];
                a.apply_adjoint(y, &mut c);
                let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if peak == 0.0 {
                    return fista_lasso(a, y, 1.0, max_iter, tol);
                }
                fista_lasso(a, y, lambda_rel * peak, max_iter, tol)
            }
        }
    }
}
