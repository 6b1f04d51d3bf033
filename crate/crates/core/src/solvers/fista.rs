//! Lasso by monotone accelerated proximal gradient (FISTA with restarts).

use super::operator::{spectral_norm_sqr, LinearOperator};
use super::SparseSolution;
use crate::error::{Error, Result};
use crate::linalg::{norm1, norm2};
use crate::C64;

fn soft_threshold(v: C64, t: f64) -> C64 {
    let mag = v.norm();
    if mag <= t {
        C64::new(0.0, 0.0)
    } else {
        v * ((mag - t) / mag)
    }
}

fn objective<A: LinearOperator + ?Sized>(a: &A, y: &[C64], x: &[C64], lambda: f64, buf: &mut [C64]) -> f64 {
    a.apply(x, buf);
    let fit: f64 = buf.iter().zip(y).map(|(p, t)| (p - t).norm_sqr()).sum();
    0.5 * fit + lambda * norm1(x)
}

/// Minimizes `0.5 |A x - y|^2 + lambda |x|_1`. A candidate step that would
/// raise the objective is rejected and the momentum restarted, so the
/// objective never increases. Returns the best iterate; `converged` is false
/// if `max_iter` was reached before the relative objective change fell below
/// `tol`.
pub fn fista_lasso<A: LinearOperator + ?Sized>(
    a: &A,
    y: &[C64],
    lambda: f64,
    max_iter: usize,
    tol: f64,
) -> Result<SparseSolution> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lasso weight must be positive"));
    }
    let (q, m) = (a.rows(), a.cols());
    if y.len() != q {
        return Err(Error::mismatch("fista_lasso", q, y.len()));
    }
    let zero = C64::new(0.0, 0.0);
    let lip = spectral_norm_sqr(a, 50) * 1.01;
    let mut x = vec![zero; m];
    let mut buf = vec![zero; q];
    let mut f_x = objective(a, y, &x, lambda, &mut buf);
    let mut history = vec![f_x];
    if lip == 0.0 || norm2(y) == 0.0 {
        return Ok(SparseSolution {
            x_hat: x,
            support: vec![],
            residual_norm: norm2(y),
            iterations: 0,
            converged: true,
            rank_deficient: false,
            residual_history: history,
        });
    }
    let step = 1.0 / lip;
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut grad = vec![zero; m];
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        a.apply(&z, &mut buf);
        for (b, t) in buf.iter_mut().zip(y) {
            *b -= t;
        }
        a.apply_adjoint(&buf, &mut grad);
        let cand: Vec<C64> = z
            .iter()
            .zip(&grad)
            .map(|(zi, gi)| soft_threshold(zi - gi * step, lambda * step))
            .collect();
        let f_c = objective(a, y, &cand, lambda, &mut buf);
        let prev = f_x;
        if f_c <= f_x {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let mom = (t - 1.0) / t_next;
            for ((zi, ci), xi) in z.iter_mut().zip(&cand).zip(&x) {
                *zi = ci + (ci - xi) * mom;
            }
            x = cand;
            f_x = f_c;
            t = t_next;
        } else {
            // restart from the best iterate
            z.copy_from_slice(&x);
            t = 1.0;
        }
        history.push(f_x);
        if (prev - f_x).abs() <= tol * f_x.max(f64::MIN_POSITIVE) && f_c <= prev {
            converged = true;
            break;
        }
    }
    a.apply(&x, &mut buf);
    let residual_norm = buf.iter().zip(y).map(|(p, t)| (p - t).norm_sqr()).sum::<f64>().sqrt();
    let support = (0..m).filter(|&j| x[j].norm() > 1e-12).collect();
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
