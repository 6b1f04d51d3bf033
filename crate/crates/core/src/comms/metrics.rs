//! Bit error rate and normalized mean-square error.

use crate::error::{Error, Result};
use crate::C64;

/// Reported MSE when the error vanishes.
pub const MSE_FLOOR_DB: f64 = -100.0;

pub fn ber(tx: &[u8], rx: &[u8]) -> Result<f64> {
    if tx.len() != rx.len() {
        return Err(Error::mismatch("ber", tx.len(), rx.len()));
    }
    if tx.is_empty() {
        return Err(Error::invalid("no bits to compare"));
    }
    let errors = tx.iter().zip(rx).filter(|(a, b)| (*a & 1) != (*b & 1)).count();
    Ok(errors as f64 / tx.len() as f64)
}

/// Masked squared error and reference energy, summed over trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MseAccumulator {
    pub error: f64,
    pub energy: f64,
}

impl MseAccumulator {
    pub fn add(&mut self, estimate: &[C64], truth: &[C64], mask: Option<&[bool]>) -> Result<()> {
        let (e, n) = masked_sums(estimate, truth, mask)?;
        self.error += e;
        self.energy += n;
        Ok(())
    }

    pub fn merge(&mut self, other: &MseAccumulator) {
        self.error += other.error;
        self.energy += other.energy;
    }

    pub fn mse_db(&self) -> f64 {
        to_db(self.error, self.energy)
    }
}

fn masked_sums(estimate: &[C64], truth: &[C64], mask: Option<&[bool]>) -> Result<(f64, f64)> {
    if estimate.len() != truth.len() {
        return Err(Error::mismatch("mse", truth.len(), estimate.len()));
    }
    if let Some(m) = mask {
        if m.len() != truth.len() {
            return Err(Error::mismatch("mse mask", truth.len(), m.len()));
        }
        if !m.iter().any(|&b| b) {
            return Err(Error::invalid("empty MSE mask"));
        }
    } else if truth.is_empty() {
        return Err(Error::invalid("empty MSE mask"));
    }
    let mut err = 0.0;
    let mut energy = 0.0;
    for (idx, (a, b)) in estimate.iter().zip(truth).enumerate() {
        if mask.is_some_and(|m| !m[idx]) {
            continue;
        }
        err += (a - b).norm_sqr();
        energy += b.norm_sqr();
    }
    Ok((err, energy))
}

fn to_db(err: f64, energy: f64) -> f64 {
    if err == 0.0 {
        return MSE_FLOOR_DB;
    }
    if energy == 0.0 {
        return f64::INFINITY;
    }
    (10.0 * (err / energy).log10()).max(MSE_FLOOR_DB)
}

/// `10 log10(sum_mask |est - truth|^2 / sum_mask |truth|^2)`, floored at
/// [`MSE_FLOOR_DB`].
pub fn mse_normalized(estimate: &[C64], truth: &[C64], mask: Option<&[bool]>) -> Result<f64> {
    let (e, n) = masked_sums(estimate, truth, mask)?;
    Ok(to_db(e, n))
}
