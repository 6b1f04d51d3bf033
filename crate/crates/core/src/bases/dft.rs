//! Doppler evaluation grid, the per-delay basis family and its DFT member.

use crate::error::{Error, Result};
use crate::linalg::{cis2pi, CMatrix};
use crate::C64;

/// Doppler frequencies `d * nu_delta` for `|d| <= d_max`, where
/// `d_max = ceil(nu_max / nu_delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerGrid {
    pub nu_delta: f64,
    pub d_max: i64,
}

impl DopplerGrid {
    /// Spacing `1/(2 N_r)`, half the canonical Doppler resolution.
    pub fn new(n_r: usize, nu_max: f64) -> Result<Self> {
        Self::with_spacing(1.0 / (2.0 * n_r as f64), nu_max)
    }

    pub fn with_spacing(nu_delta: f64, nu_max: f64) -> Result<Self> {
        if !(nu_delta > 0.0) || !(nu_max >= 0.0) {
            return Err(Error::invalid("Doppler grid needs nu_delta > 0 and nu_max >= 0"));
        }
        let ratio = nu_max / nu_delta;
        // ceil, tolerant to ratios that are integers up to round-off
        let d_max = if (ratio - ratio.round()).abs() < 1e-9 {
            ratio.round() as i64
        } else {
            ratio.ceil() as i64
        };
        Ok(DopplerGrid { nu_delta, d_max })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (-self.d_max..=self.d_max).map(|d| d as f64 * self.nu_delta).collect()
    }

    pub fn len(&self) -> usize {
        (2 * self.d_max + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Dft,
    DetOptimized,
    StatOptimized,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Dft => "dft",
            Provenance::DetOptimized => "det-optimized",
            Provenance::StatOptimized => "stat-optimized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dft" => Some(Provenance::Dft),
            "det-optimized" => Some(Provenance::DetOptimized),
            "stat-optimized" => Some(Provenance::StatOptimized),
            _ => None,
        }
    }
}

/// Unitary J x J matrices `B_m`, one per delay `m < D`. Row `i + J/2` of
/// `B_m` holds the conjugated basis function `b_{m,i}[lambda]`, so the
/// expansion coefficients of a vector `c` are `B_m c`. Delays that share a
/// matrix point at the same entry of `matrices`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily {
    pub provenance: Provenance,
    j: usize,
    matrices: Vec<CMatrix>,
    assignment: Vec<usize>,
    /// Per distinct matrix, the l1 cost after each optimization iteration.
    pub cost_trace: Vec<Vec<f64>>,
}

impl BasisFamily {
    pub fn new(
        provenance: Provenance,
        matrices: Vec<CMatrix>,
        assignment: Vec<usize>,
        cost_trace: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let j = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        if j == 0 {
            return Err(Error::invalid("basis family needs at least one matrix"));
        }
        for mat in &matrices {
            if mat.nrows() != j || mat.ncols() != j {
                return Err(Error::mismatch("BasisFamily::new", j, mat.nrows()));
            }
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= matrices.len()) {
            return Err(Error::invalid(format!("assignment index {bad} out of range")));
        }
        Ok(BasisFamily {
            provenance,
            j,
            matrices,
            assignment,
            cost_trace,
        })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn d(&self) -> usize {
        self.assignment.len()
    }

    pub fn matrix(&self, m: usize) -> &CMatrix {
        &self.matrices[self.assignment[m]]
    }

    pub fn distinct_matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `b_{m,i}[lambda]` for `i` in `-J/2..J/2`.
    pub fn function(&self, m: usize, i: i64, lambda: usize) -> C64 {
        let row = (i + self.j as i64 / 2) as usize;
        self.matrix(m)[(row, lambda)].conj()
    }

    /// Worst unitarity residual over all matrices.
    pub fn unitarity_residual(&self) -> f64 {
        self.matrices
            .iter()
            .map(crate::linalg::unitarity_residual)
            .fold(0.0, f64::max)
    }
}

/// `B[i + J/2, lambda] = e^{-j2pi lambda i / J} / sqrt(J)`.
pub fn dft_matrix(j: usize) -> CMatrix {
    let s = 1.0 / (j as f64).sqrt();
    let half = j as i64 / 2;
    CMatrix::from_fn(j, j, |row, lambda| {
        let i = row as i64 - half;
        cis2pi(-((lambda as i64 * i) as f64) / j as f64) * s
    })
}

/// All `B_m` equal to the unitary J-point DFT matrix.
pub fn dft_basis(j: usize, d: usize) -> Result<BasisFamily> {
    if j == 0 || d == 0 {
        return Err(Error::invalid("dft_basis needs J, D >= 1"));
    }
    BasisFamily::new(Provenance::Dft, vec![dft_matrix(j)], vec![0; d], vec![vec![]])
}
