//! CoSaMP with LSQR least-squares estimation on the merged support.

use super::lsqr::lsqr;
use super::operator::{ColumnSubset, LinearOperator};
use super::SparseSolution;
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::C64;

fn top_indices(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    // ties broken by index so the result is deterministic
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}

/// CoSaMP: identify the `2s` largest residual correlations, merge with the
/// current support, least-squares fit there with `lsqr_iter` LSQR
/// iterations, prune to the `s` largest entries, repeat `max_iter` times.
pub fn cosamp<A: LinearOperator + ?Sized>(
    a: &A,
    y: &[C64],
    s: usize,
    max_iter: usize,
    lsqr_iter: usize,
) -> Result<SparseSolution> {
    let (q, m) = (a.rows(), a.cols());
    if y.len() != q {
        return Err(Error::mismatch("cosamp", q, y.len()));
    }
    let zero = C64::new(0.0, 0.0);
    let y_norm = norm2(y);
    let mut x = vec![zero; m];
    let mut support: Vec<usize> = Vec::new();
    let mut residual = y.to_vec();
    let mut history = vec![y_norm];
    let mut corr = vec![zero; m];
    let mut iterations = 0;
    let mut converged = s == 0 || y_norm == 0.0;

    if !converged {
        for _ in 0..max_iter {
            iterations += 1;
            a.apply_adjoint(&residual, &mut corr);
            let mags: Vec<f64> = corr.iter().map(|v| v.norm()).collect();
            let mut merged = top_indices(&mags, (2 * s).min(m));
            merged.extend(support.iter().copied());
            merged.sort_unstable();
            merged.dedup();

            let sub = ColumnSubset::new(a, &merged);
            let fit = lsqr(&sub, y, lsqr_iter, 1e-14);
            let fit_mags: Vec<f64> = fit.x.iter().map(|v| v.norm()).collect();
            let keep = top_indices(&fit_mags, s.min(merged.len()));

            let mut next = vec![zero; m];
            let mut next_support: Vec<usize> = keep.iter().map(|&t| merged[t]).collect();
            for &t in &keep {
                next[merged[t]] = fit.x[t];
            }
            next_support.sort_unstable();

            let mut ax = vec![zero; q];
            a.apply(&next, &mut ax);
            let next_residual: Vec<C64> = y.iter().zip(&ax).map(|(t, p)| t - p).collect();
            let rn = norm2(&next_residual);
            let unchanged = next_support == support;
            x = next;
            support = next_support;
            residual = next_residual;
            history.push(rn);
            if rn <= 1e-12 * y_norm || unchanged {
                converged = true;
                break;
            }
        }
    }
    let residual_norm = norm2(&residual);
    Ok(SparseSolution {
        x_hat: x,
        support,
        residual_norm,
        iterations,
        converged,
        rank_deficient: false,
        residual_history: history,
    })
}
