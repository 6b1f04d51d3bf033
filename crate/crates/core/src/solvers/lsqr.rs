//! LSQR: Golub-Kahan bidiagonalization for least squares (Paige & Saunders).

use super::operator::LinearOperator;
use crate::linalg::norm2;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct LsqrOutcome {
    pub x: Vec<C64>,
    pub iterations: usize,
    /// Estimate of `|A^H (b - A x)|` at exit.
    pub normal_residual: f64,
    pub residual_norm: f64,
}

/// Approximates the minimum-norm least-squares solution of `A x = b`.
/// Stops when the normal-equation residual falls below `tol * |A^H b|` or
/// after `max_iter` iterations.
pub fn lsqr<A: LinearOperator + ?Sized>(a: &A, b: &[C64], max_iter: usize, tol: f64) -> LsqrOutcome {
    let (m, n) = (a.rows(), a.cols());
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut u = b.to_vec();
    let mut beta = norm2(&u);
    if beta == 0.0 || n == 0 {
        return LsqrOutcome {
            x,
            iterations: 0,
            normal_residual: 0.0,
            residual_norm: beta,
        };
    }
    u.iter_mut().for_each(|v| *v /= beta);
    let mut v = vec![zero; n];
    a.apply_adjoint(&u, &mut v);
    let mut alpha = norm2(&v);
    let atb = alpha * beta;
    if alpha == 0.0 {
        return LsqrOutcome {
            x,
            iterations: 0,
            normal_residual: 0.0,
            residual_norm: beta,
        };
    }
    v.iter_mut().for_each(|t| *t /= alpha);
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let mut normal_residual = atb;
    let mut av = vec![zero; m];
    let mut atu = vec![zero; n];
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        // bidiagonalization step
        a.apply(&v, &mut av);
        for (ui, avi) in u.iter_mut().zip(&av) {
            *ui = avi - *ui * alpha;
        }
        beta = norm2(&u);
        if beta > 0.0 {
            u.iter_mut().for_each(|t| *t /= beta);
            a.apply_adjoint(&u, &mut atu);
            for (vi, ai) in v.iter_mut().zip(&atu) {
                *vi = ai - *vi * beta;
            }
            alpha = norm2(&v);
            if alpha > 0.0 {
                v.iter_mut().for_each(|t| *t /= alpha);
            }
        } else {
            alpha = 0.0;
        }

        // plane rotation
        let rho = (rhobar * rhobar + beta * beta).sqrt();
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= s;

        let t1 = phi / rho;
        let t2 = -theta / rho;
        for ((xi, wi), vi) in x.iter_mut().zip(w.iter_mut()).zip(&v) {
            *xi += *wi * t1;
            *wi = vi + *wi * t2;
        }

        normal_residual = phibar * alpha * c.abs();
        if normal_residual <= tol * atb || alpha == 0.0 || beta == 0.0 {
            break;
        }
    }
    LsqrOutcome {
        x,
        iterations,
        normal_residual,
        residual_norm: phibar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::operator::DenseOperator;

    #[test]
    fn identity_in_one_iteration() {
        let a = DenseOperator::from_fn(4, 4, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        let b = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5), C64::new(0.0, 1.0), C64::new(2.0, 2.0)];
        let out = lsqr(&a, &b, 1, 0.0);
        for (x, y) in out.x.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_rhs() {
        let a = DenseOperator::from_fn(3, 2, |i, j| C64::new((i + j) as f64, 1.0));
        let out = lsqr(&a, &[C64::new(0.0, 0.0); 3], 10, 1e-12);
        assert!(out.x.iter().all(|v| v.norm() == 0.0));
    }
}
