//! Single-scatterer Doppler responses `c_m^{(nu)}` seen through the 1-D
//! Doppler expansion at delay `m`.

use super::dft::DopplerGrid;
use crate::channel::doppler_leakage;
use crate::error::{Error, Result};
use crate::frame::{ambiguity_row, McConfig};
use crate::linalg::{cis2pi, FftPair};
use crate::C64;

/// `C[m, lambda] = sum_{i=-J/2}^{J/2-1} sum_{q<N_r/L} psi_nu[i+qL]
///   A*(m, (i+qL)/N_r) e^{j2pi lambda i / J}` for every `nu` of the grid.
pub fn c_vectors(cfg: &McConfig, grid: &DopplerGrid, m: usize, j: usize) -> Result<Vec<Vec<C64>>> {
    let fft = FftPair::new(cfg.n_r());
    c_vectors_with(cfg, &grid.frequencies(), m, j, &fft)
}

/// As [`c_vectors`] for an explicit frequency list.
pub fn c_vectors_with(
    cfg: &McConfig,
    freqs: &[f64],
    m: usize,
    j: usize,
    fft: &FftPair,
) -> Result<Vec<Vec<C64>>> {
    let (n_r, l) = (cfg.n_r(), cfg.l());
    if n_r % l != 0 {
        return Err(Error::invalid("Doppler folding needs N_r to be a multiple of L"));
    }
    if j == 0 || j > l || j % 2 != 0 && j != 1 {
        return Err(Error::invalid(format!("J = {j} must be even and at most L = {l}")));
    }
    if fft.len != n_r {
        return Err(Error::mismatch("c_vectors", n_r, fft.len));
    }
    let amb = ambiguity_row(cfg, m as i64, fft);
    let half = j as i64 / 2;
    let folds = (n_r / l) as i64;
    let mut out = Vec::with_capacity(freqs.len());
    for &nu in freqs {
        // alpha_i / sqrt(J), i in -J/2..J/2
        let mut alpha = Vec::with_capacity(j);
        for i in -half..j as i64 - half {
            let mut acc = C64::new(0.0, 0.0);
            for q in 0..folds {
                let idx = i + q * l as i64;
                acc += doppler_leakage(nu, idx, n_r) * amb[idx.rem_euclid(n_r as i64) as usize].conj();
            }
            alpha.push(acc);
        }
        let c: Vec<C64> = (0..j)
            .map(|lambda| {
                alpha
                    .iter()
                    .enumerate()
                    .map(|(t, a)| a * cis2pi(((lambda as i64) * (t as i64 - half)) as f64 / j as f64))
                    .sum()
            })
            .collect();
        out.push(c);
    }
    Ok(out)
}

fn same_sets(a: &[Vec<C64>], b: &[Vec<C64>]) -> bool {
    let scale: f64 = a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - y).norm() <= 1e-12 * scale)
}

/// Groups delays with numerically identical c-vector sets. Returns the
/// distinct sets and the group index of every delay.
pub fn group_c_sets(sets: Vec<Vec<Vec<C64>>>) -> (Vec<Vec<Vec<C64>>>, Vec<usize>) {
    let mut distinct: Vec<Vec<Vec<C64>>> = Vec::new();
    let mut assignment = Vec::with_capacity(sets.len());
    for s in sets {
        match distinct.iter().position(|d| same_sets(d, &s)) {
            Some(p) => assignment.push(p),
            None => {
                assignment.push(distinct.len());
                distinct.push(s);
            }
        }
    }
    (distinct, assignment)
}

/// c-vector sets for every delay `m < d`.
pub fn c_vector_sets(cfg: &McConfig, grid: &DopplerGrid, d: usize, j: usize) -> Result<Vec<Vec<Vec<C64>>>> {
    let fft = FftPair::new(cfg.n_r());
    let freqs = grid.frequencies();
    (0..d).map(|m| c_vectors_with(cfg, &freqs, m, j, &fft)).collect()
}
