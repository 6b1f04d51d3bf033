//! Small dense helpers shared by the solvers, bases and estimators.

use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::{Fft, FftPlanner};

use crate::C64;

pub type CMatrix = DMatrix<C64>;

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

pub fn norm1(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

/// Hermitian inner product `x^H y`.
pub fn dotc(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [C64]) {
    for v in x.iter_mut() {
        *v *= alpha;
    }
}

/// `e^{j 2 pi x}` with the argument reduced first, which keeps phases
/// accurate for large `x`.
pub fn cis2pi(x: f64) -> C64 {
    let r = x - x.round();
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r)
}

/// `sin(pi x)/(pi x)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let px = std::f64::consts::PI * x;
    // sin(pi x) via the reduced argument so that integers give exact zeros
    let r = x - x.round();
    let s = (std::f64::consts::PI * r).sin() * if (x.round() as i64) % 2 == 0 { 1.0 } else { -1.0 };
    s / px
}

/// Forward and inverse plans of one length, unnormalized.
#[derive(Clone)]
pub struct FftPair {
    pub len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair {
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    /// In place `X[k] = sum_n x[n] e^{-j 2 pi k n / len}`.
    pub fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    /// In place `x[n] = sum_k X[k] e^{+j 2 pi k n / len}` (no 1/len).
    pub fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
    }
}

/// Unitarity residual `max |B B^H - I|`.
pub fn unitarity_residual(b: &CMatrix) -> f64 {
    let g = b * b.adjoint();
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Coherence `sqrt(M) * max |U_ij|` of a square matrix.
pub fn coherence(u: &CMatrix) -> f64 {
    let m = u.nrows() as f64;
    m.sqrt() * u.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `e^{jA}` for Hermitian `A` through its eigendecomposition.
pub fn expm_j_hermitian(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    // symmetrize against round-off before the Hermitian solver sees it
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = C64::from_polar(1.0, eig.eigenvalues[i]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_integers_are_exact_zeros() {
        assert_eq!(sinc(0.0), 1.0);
        for k in 1..10 {
            assert_eq!(sinc(k as f64), 0.0);
            assert_eq!(sinc(-(k as f64)), 0.0);
        }
        assert!((sinc(0.5) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn expm_of_hermitian_is_unitary() {
        let a = CMatrix::from_fn(5, 5, |i, j| {
            let v = C64::new((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.07);
            v
        });
        let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let u = expm_j_hermitian(&h);
        assert!(unitarity_residual(&u) < 1e-12);
        let z = expm_j_hermitian(&CMatrix::zeros(3, 3));
        assert!((z - CMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn fft_pair_matches_direct_dft() {
        let n = 12;
        let x: Vec<C64> = (0..n).map(|i| C64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let mut buf = x.clone();
        FftPair::new(n).forward(&mut buf);
        for (k, got) in buf.iter().enumerate() {
            let want: C64 = x
                .iter()
                .enumerate()
                .map(|(m, v)| v * cis2pi(-((k * m) as f64) / n as f64))
                .sum();
            assert!((got - want).norm() < 1e-10);
        }
    }
}
