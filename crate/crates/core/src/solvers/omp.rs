//! Orthogonal matching pursuit with an incremental QR refit.

use super::operator::LinearOperator;
use super::SparseSolution;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dotc, norm2};
use crate::C64;

/// Greedy recovery of an `s`-sparse `x` from `y = A x`. Each step adds the
/// column most correlated with the residual (correlations are divided by the
/// column norms) and refits all selected coefficients by least squares.
///
/// A column that is numerically dependent on the current selection is
/// skipped and `rank_deficient` is set; the selection then continues with the
/// next-best column.
pub fn omp<A: LinearOperator + ?Sized>(a: &A, y: &[C64], s: usize) -> Result<SparseSolution> {
    let (q, m) = (a.rows(), a.cols());
    if y.len() != q {
        return Err(Error::mismatch("omp", q, y.len()));
    }
    let zero = C64::new(0.0, 0.0);
    let col_norms = a.column_norms();
    let y_norm = norm2(y);
    let mut residual = y.to_vec();
    let mut history = vec![y_norm];
    let mut support: Vec<usize> = Vec::with_capacity(s);
    let mut excluded = vec![false; m];
    let mut qcols: Vec<Vec<C64>> = Vec::with_capacity(s);
    // R stored column by column: r_cols[t][i] = R[i, t]
    let mut r_cols: Vec<Vec<C64>> = Vec::with_capacity(s);
    let mut qty: Vec<C64> = Vec::with_capacity(s);
    let mut rank_deficient = false;
    let mut corr = vec![zero; m];
    let mut iterations = 0;

    while support.len() < s.min(q) {
        if norm2(&residual) <= 1e-14 * y_norm.max(f64::MIN_POSITIVE) || y_norm == 0.0 {
            break;
        }
        iterations += 1;
        a.apply_adjoint(&residual, &mut corr);
        let mut best = None;
        let mut best_val = 0.0;
        for j in 0..m {
            if excluded[j] || col_norms[j] == 0.0 {
                continue;
            }
            let v = corr[j].norm() / col_norms[j];
            if v > best_val {
                best_val = v;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        excluded[j] = true;

        // orthogonalize the new column twice against the current basis
        let col = a.column(j);
        let mut w = col.clone();
        let mut rcol = vec![zero; qcols.len() + 1];
        for _ in 0..2 {
            for (t, qc) in qcols.iter().enumerate() {
                let c = dotc(qc, &w);
                rcol[t] += c;
                axpy(-c, qc, &mut w);
            }
        }
        let wn = norm2(&w);
        if wn <= 1e-10 * col_norms[j] {
            rank_deficient = true;
            continue;
        }
        w.iter_mut().for_each(|v| *v /= wn);
        rcol[qcols.len()] = C64::new(wn, 0.0);
        let c = dotc(&w, y);
        let cr = dotc(&w, &residual);
        axpy(-cr, &w, &mut residual);
        qty.push(c);
        qcols.push(w);
        r_cols.push(rcol);
        support.push(j);
        history.push(norm2(&residual));
    }

    // back substitution R z = Q^H y
    let k = support.len();
    let mut z = vec![zero; k];
    for i in (0..k).rev() {
        let mut acc = qty[i];
        for t in i + 1..k {
            acc -= r_cols[t][i] * z[t];
        }
        z[i] = acc / r_cols[i][i];
    }
    let mut x_hat = vec![zero; m];
    for (idx, &j) in support.iter().enumerate() {
        x_hat[j] = z[idx];
    }
    let mut ax = vec![zero; q];
    a.apply(&x_hat, &mut ax);
    let residual_norm = ax
        .iter()
        .zip(y)
        .map(|(p, t)| (t - p).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut sorted = support.clone();
    sorted.sort_unstable();
    Ok(SparseSolution {
        x_hat,
        support: sorted,
        residual_norm,
        iterations,
        converged: true,
        rank_deficient,
        residual_history: history,
    })
}
