//! Time-domain basis of DFT functions completed by orthonormalized DPSS.

use super::dpss::dpss;
use crate::error::{Error, Result};
use crate::linalg::{axpy, cis2pi, dotc, norm2};
use crate::C64;

/// Explicit functions `psi_i[n]`, `i < J = 2 J0 + J1`: the DFT functions of
/// frequencies `(i - J0)/N_r` for `i <= 2 J0`, then `J1 - 1` DPSS sequences
/// orthonormalized against everything before them.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedBasis {
    n_r: usize,
    j0: usize,
    j1: usize,
    functions: Vec<Vec<C64>>,
}

impl CombinedBasis {
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    pub fn j1(&self) -> usize {
        self.j1
    }

    pub fn j(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[Vec<C64>] {
        &self.functions
    }

    pub fn function(&self, i: usize) -> &[C64] {
        &self.functions[i]
    }

    /// Builds a basis from explicit functions (used by dictionary import).
    pub fn from_functions(n_r: usize, j0: usize, j1: usize, functions: Vec<Vec<C64>>) -> Result<Self> {
        if functions.len() != 2 * j0 + j1 {
            return Err(Error::mismatch("CombinedBasis::from_functions", 2 * j0 + j1, functions.len()));
        }
        if let Some(f) = functions.iter().find(|f| f.len() != n_r) {
            return Err(Error::mismatch("CombinedBasis::from_functions", n_r, f.len()));
        }
        Ok(CombinedBasis { n_r, j0, j1, functions })
    }

    /// `vartheta[i] = sum_n e^{j2pi nu n} conj(psi_i[n])`.
    pub fn vartheta(&self, nu: f64) -> Vec<C64> {
        vartheta(&self.functions, nu)
    }

    /// Energy of the unit-modulus tone at `nu` outside the explicit
    /// functions, `N_r - sum_i |vartheta[i]|^2`.
    pub fn energy_outside(&self, nu: f64) -> f64 {
        let inside: f64 = self.vartheta(nu).iter().map(|v| v.norm_sqr()).sum();
        (self.n_r as f64 - inside).max(0.0)
    }

    /// Gram matrix residual `max |<psi_a, psi_b> - delta_ab|`.
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.j() {
            for b in 0..self.j() {
                let g = dotc(&self.functions[a], &self.functions[b]);
                let t = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(t, 0.0)).norm());
            }
        }
        worst
    }
}

/// Unit-norm DFT function `e^{j2pi d n / N_r} / sqrt(N_r)`.
pub fn dft_function(n_r: usize, d: i64) -> Vec<C64> {
    let s = 1.0 / (n_r as f64).sqrt();
    (0..n_r)
        .map(|n| cis2pi(((d * n as i64).rem_euclid(n_r as i64)) as f64 / n_r as f64) * s)
        .collect()
}

/// `J0 = floor(nu_max N_r)`, `J = 2 J0 + J1`; the DPSS have half-bandwidth
/// `nu_max`.
pub fn combined_basis(n_r: usize, nu_max: f64, j1: usize) -> Result<CombinedBasis> {
    if j1 < 2 {
        return Err(Error::invalid("J1 must be at least 2"));
    }
    if !(nu_max > 0.0 && nu_max < 0.5) {
        return Err(Error::invalid(format!("maximum Doppler {nu_max} outside (0, 1/2)")));
    }
    let j0 = (nu_max * n_r as f64 + 1e-9).floor() as usize;
    let j = 2 * j0 + j1;
    if j >= n_r {
        return Err(Error::invalid(format!("J = {j} must be smaller than N_r = {n_r}")));
    }
    let mut functions: Vec<Vec<C64>> = (-(j0 as i64)..=j0 as i64).map(|d| dft_function(n_r, d)).collect();
    {
        let slep = dpss(n_r, nu_max, j)?;
        for s in slep.iter().skip(2 * j0 + 1) {
            let mut v: Vec<C64> = s.iter().map(|&x| C64::new(x, 0.0)).collect();
            for _ in 0..2 {
                for f in &functions {
                    let c = dotc(f, &v);
                    axpy(-c, f, &mut v);
                }
            }
            let nrm = norm2(&v);
            if nrm < 1e-8 {
                return Err(Error::Degenerate("DPSS sequence lies in the span of the DFT part".into()));
            }
            v.iter_mut().for_each(|x| *x /= nrm);
            functions.push(v);
        }
    }
    Ok(CombinedBasis { n_r, j0, j1, functions })
}

/// `vartheta[i] = sum_n e^{j2pi nu n} conj(psi_i[n])` for arbitrary functions.
pub fn vartheta(functions: &[Vec<C64>], nu: f64) -> Vec<C64> {
    let n_r = functions.first().map(|f| f.len()).unwrap_or(0);
    let tone: Vec<C64> = (0..n_r).map(|n| cis2pi(nu * n as f64)).collect();
    functions.iter().map(|f| dotc(f, &tone)).collect()
}

/// `vartheta` against the DFT functions of frequencies `d/N_r`, `d` in `ds`.
pub fn vartheta_dft(n_r: usize, nu: f64, ds: impl IntoIterator<Item = i64>) -> Vec<C64> {
    let s = 1.0 / (n_r as f64).sqrt();
    ds.into_iter()
        .map(|d| crate::channel::doppler_leakage(nu, d, n_r) * (n_r as f64 * s))
        .collect()
}

/// `vartheta` against the first `count` DPSS of half-bandwidth `w`.
pub fn vartheta_dpss(n_r: usize, w: f64, nu: f64, count: usize) -> Result<Vec<C64>> {
    let seqs = dpss(n_r, w, count)?;
    Ok(seqs
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .map(|(n, &x)| cis2pi(nu * n as f64) * x)
                .sum()
        })
        .collect())
}
