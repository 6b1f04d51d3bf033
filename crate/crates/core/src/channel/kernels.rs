//! Closed-form delay and Doppler leakage kernels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{cis2pi, sinc};
use crate::C64;

/// Interpolation/anti-aliasing filter cascade, collapsed into its delay kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterModel {
    Ideal,
    RootRaisedCosine { rolloff: f64 },
}

impl FilterModel {
    pub fn rrc(rolloff: f64) -> Result<Self> {
        if !(rolloff > 0.0 && rolloff <= 1.0) {
            return Err(Error::invalid(format!("roll-off {rolloff} outside (0, 1]")));
        }
        Ok(FilterModel::RootRaisedCosine { rolloff })
    }

    /// Polynomial decay order `s` of `|phi(x)|` (|phi| <= C (1+|x|/x0)^-s).
    pub fn decay_order(&self) -> i32 {
        match self {
            FilterModel::Ideal => 1,
            FilterModel::RootRaisedCosine { .. } => 3,
        }
    }
}

/// Delay kernel `phi(x)`. The Doppler argument is accepted for interface
/// symmetry; both models use the small-Doppler form that ignores it.
pub fn phi_kernel(model: FilterModel, _doppler_norm: f64, x: f64) -> f64 {
    match model {
        FilterModel::Ideal => sinc(x),
        FilterModel::RootRaisedCosine { rolloff } => {
            let t = 2.0 * rolloff * x;
            let den = 1.0 - t * t;
            if den.abs() < 1e-8 {
                // removable singularity at |2 rho x| = 1
                PI / 4.0 * sinc(x)
            } else {
                sinc(x) * (rolloff * PI * x).cos() / den
            }
        }
    }
}

/// Dirichlet kernel `psi(y) = sin(pi y) / (N_r sin(pi y / N_r))`.
pub fn psi_kernel(y: f64, n_r: usize) -> f64 {
    let nr = n_r as f64;
    let q = y / nr;
    let qr = q.round();
    if (q - qr).abs() < 1e-13 {
        // y = q N_r: limit (-1)^{q (N_r - 1)}
        let parity = ((qr as i64) * (n_r as i64 - 1)).rem_euclid(2);
        return if parity == 0 { 1.0 } else { -1.0 };
    }
    let yr = y.round();
    if (y - yr).abs() < 1e-13 {
        return 0.0;
    }
    let num = (PI * (y - yr)).sin() * if (yr as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    num / (nr * (PI * y / nr).sin())
}

/// `(1/N_r) sum_{n<N_r} e^{j2pi (nu - i/N_r) n}`: the N_r-point Doppler
/// leakage of a tone at normalized frequency `nu` into bin `i`.
pub fn doppler_leakage(nu: f64, i: i64, n_r: usize) -> C64 {
    let nr = n_r as f64;
    let x = nu - i as f64 / nr;
    let xr = x - x.round();
    if xr.abs() < 1e-15 {
        return C64::new(1.0, 0.0);
    }
    // geometric sum (1 - e^{j2pi x N_r}) / (N_r (1 - e^{j2pi x}))
    let num = C64::new(1.0, 0.0) - cis2pi(xr * nr);
    let den = (C64::new(1.0, 0.0) - cis2pi(xr)) * nr;
    num / den
}
