//! Compressive estimation of the diagonal channel coefficients from pilots on
//! a subsampled grid, with the DFT or an optimized per-delay Doppler basis.

use super::pilots::{ls_pilot_estimates, PilotSet, SubsampledGrid};
use crate::bases::BasisFamily;
use crate::channel::{synthesize_from_f, FCoefficients};
use crate::error::{Error, Result};
use crate::frame::{McConfig, SymbolGrid};
use crate::linalg::cis2pi;
use crate::solvers::{DenseOperator, SolverSpec, SparseSolution};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalEstimate {
    /// `H_{l,k}` on the full grid.
    pub h_hat: SymbolGrid,
    /// `F[m, i]`, `m < D`, `i` in `-J/2..J/2`.
    pub f_hat: FCoefficients,
    pub solution: SparseSolution,
}

/// Column of coefficient `(m, i)`: `i' D + m` with `i' = i + J/2`.
pub fn coefficient_column(d: usize, j: usize, m: usize, i: i64) -> usize {
    (i + j as i64 / 2) as usize * d + m
}

/// `V[(kappa J + lambda), (m,i)] = b_{m,i}[lambda] e^{-j2pi kappa m / D} / sqrt(D)`
/// restricted to the pilot rows (not normalized).
pub fn measurement_matrix(grid: &SubsampledGrid, pilots: &PilotSet, basis: &BasisFamily) -> Result<DenseOperator> {
    let (d, j) = (grid.d, grid.j);
    if basis.j() != j || basis.d() != d {
        return Err(Error::invalid(format!(
            "basis has J = {}, D = {} but the grid has J = {j}, D = {d}",
            basis.j(),
            basis.d()
        )));
    }
    let rows: Vec<(usize, usize)> = pilots
        .positions
        .iter()
        .map(|&(l, k)| {
            grid.index_of(l, k)
                .map(|idx| (idx % j, idx / j))
                .ok_or_else(|| Error::invalid(format!("pilot ({l}, {k}) is not on the subsampled grid")))
        })
        .collect::<Result<_>>()?;
    let s = 1.0 / (d as f64).sqrt();
    let half = j as i64 / 2;
    let mut cols = Vec::with_capacity(d * j);
    for ip in 0..j as i64 {
        let i = ip - half;
        for m in 0..d {
            let col = rows
                .iter()
                .map(|&(lambda, kappa)| {
                    let turns = (kappa * m) % d;
                    basis.function(m, i, lambda) * cis2pi(-(turns as f64) / d as f64) * s
                })
                .collect();
            cols.push(col);
        }
    }
    DenseOperator::from_columns(rows.len(), cols)
}

/// `F[m,i] = (1 / (J sqrt D)) sum_lambda g_m[lambda] e^{-j2pi lambda i / J}`
/// with `g_m[lambda] = sum_i beta_{m,i} b_{m,i}[lambda]`.
pub fn coefficients_to_f(beta: &[C64], grid: &SubsampledGrid, basis: &BasisFamily) -> FCoefficients {
    let (d, j) = (grid.d, grid.j);
    let half = j as i64 / 2;
    let scale = 1.0 / (j as f64 * (d as f64).sqrt());
    let mut f = FCoefficients::zeros(d, j);
    for m in 0..d {
        let g: Vec<C64> = (0..j)
            .map(|lambda| {
                (-half..j as i64 - half)
                    .map(|i| beta[coefficient_column(d, j, m, i)] * basis.function(m, i, lambda))
                    .sum()
            })
            .collect();
        for i in -half..j as i64 - half {
            let acc: C64 = g
                .iter()
                .enumerate()
                .map(|(lambda, v)| v * cis2pi(-((lambda as i64 * i).rem_euclid(j as i64)) as f64 / j as f64))
                .sum();
            f.set(m, i, acc * scale);
        }
    }
    f
}

/// Pilot least-squares estimates, measurement equation with unit-norm
/// columns, sparse recovery, and synthesis of all diagonal coefficients.
pub fn estimate_diagonal(
    r: &SymbolGrid,
    pilots: &PilotSet,
    grid: &SubsampledGrid,
    basis: &BasisFamily,
    cfg: &McConfig,
    solver: &SolverSpec,
) -> Result<DiagonalEstimate> {
    if r.rows() != cfg.l() || r.cols() != cfg.k() {
        return Err(Error::mismatch("estimate_diagonal", cfg.l() * cfg.k(), r.rows() * r.cols()));
    }
    let y = ls_pilot_estimates(r, pilots)?;
    let mut phi = measurement_matrix(grid, pilots, basis)?;
    let scales = phi.normalize_columns();
    let solution = solver.solve(&phi, &y)?;
    let beta: Vec<C64> = solution.x_hat.iter().zip(&scales).map(|(x, s)| x * s).collect();
    let f_hat = coefficients_to_f(&beta, grid, basis);
    let h_hat = synthesize_from_f(&f_hat, cfg)?;
    Ok(DiagonalEstimate { h_hat, f_hat, solution })
}
