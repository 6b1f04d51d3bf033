//! Browser bindings for three small views: the delay and Doppler leakage
//! kernels, the coefficient profile of a single Doppler tone in the DFT and
//! combined DFT-DPSS time bases, and the Doppler coefficients of one
//! scatterer in the DFT and optimized bases.
//!
//! Every export returns a flat `Vec<f64>`; the layout is given on each
//! function. Invalid arguments surface as JS exceptions.

use ddchan_core::bases::{c_vectors_with, combined_basis, dft_matrix, optimized_basis, vartheta_dft, OptimizeParams};
use ddchan_core::channel::{phi_kernel, psi_kernel, FilterModel};
use ddchan_core::frame::McConfig;
use ddchan_core::linalg::FftPair;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Delay kernel of a scatterer at fractional delay `tau` and the Doppler
/// kernel of a tone `offset` bins off the grid, sampled at the integer
/// offsets `-half..=half`.
///
/// Layout: `[phi(-half - tau), ..., phi(half - tau), psi(-half - offset), ...]`,
/// each block `2 half + 1` long. `rolloff = 0` selects the ideal lowpass.
pub fn kernels(rolloff: f64, tau: f64, offset: f64, n_r: usize, half: usize) -> Result<Vec<f64>, String> {
    let model = if rolloff == 0.0 {
        FilterModel::Ideal
    } else {
        FilterModel::rrc(rolloff).map_err(|e| e.to_string())?
    };
    if n_r < 2 {
        return Err("N_r must be at least 2".into());
    }
    let span = -(half as i64)..=half as i64;
    let mut out: Vec<f64> = span.clone().map(|m| phi_kernel(model, 0.0, m as f64 - tau)).collect();
    out.extend(span.map(|i| psi_kernel(i as f64 - offset, n_r).abs()));
    Ok(out)
}

/// `|vartheta|` of a unit tone at `nu_bins / N_r` against the combined basis
/// with half-bandwidth `nu_max_bins / N_r` and `j1` DPSS, and against the
/// DFT functions at the same `2 J0 + 1` frequencies followed by `j1` further
/// DFT neighbours.
///
/// Layout: `[J, combined_0..combined_{J-1}, dft_0..dft_{J-1},
/// energy_outside_combined, energy_outside_dft]` with energies relative to
/// the tone energy `N_r`.
pub fn vartheta_profiles(n_r: usize, nu_max_bins: f64, j1: usize, nu_bins: f64) -> Result<Vec<f64>, String> {
    if n_r == 0 {
        return Err("N_r must be positive".into());
    }
    let nf = n_r as f64;
    let cb = combined_basis(n_r, nu_max_bins / nf, j1).map_err(|e| e.to_string())?;
    let nu = nu_bins / nf;
    let j = cb.j();
    let j0 = cb.j0() as i64;
    let combined: Vec<f64> = cb.vartheta(nu).iter().map(|v| v.norm()).collect();
    // same count of DFT functions, centered on zero Doppler
    let lo = -j0 - (j1 as i64) / 2;
    let dft: Vec<f64> = vartheta_dft(n_r, nu, lo..lo + j as i64).iter().map(|v| v.norm()).collect();
    let outside = |v: &[f64]| (1.0 - v.iter().map(|x| x * x).sum::<f64>() / nf).max(0.0);
    let mut out = vec![j as f64];
    out.extend(&combined);
    out.extend(&dft);
    out.push(outside(&combined));
    out.push(outside(&dft));
    Ok(out)
}

/// Doppler coefficients `|B c|` of one scatterer at `nu_bins / N_r` and delay
/// 0 in a small CP-OFDM system (`K`, `N = 5K/4`, `L`), for the DFT basis and
/// the basis optimized for `nu_max_bins / N_r`. `J = L`.
///
/// Layout: `[J, dft_0..dft_{J-1}, opt_0..opt_{J-1}, l1_dft, l1_opt]`.
pub fn basis_coefficients(k: usize, l: usize, nu_max_bins: f64, nu_bins: f64, iters: usize) -> Result<Vec<f64>, String> {
    if k % 4 != 0 {
        return Err("K must be a multiple of 4".into());
    }
    let cfg = McConfig::cp_ofdm(k, k + k / 4, l).map_err(|e| e.to_string())?;
    let nf = cfg.n_r() as f64;
    let params = OptimizeParams {
        max_iter: iters,
        ..OptimizeParams::default()
    };
    let fam = optimized_basis(&cfg, nu_max_bins / nf, 1, l, &params).map_err(|e| e.to_string())?;
    let fft = FftPair::new(cfg.n_r());
    let cv = c_vectors_with(&cfg, &[nu_bins / nf], 0, l, &fft).map_err(|e| e.to_string())?;
    let cv = &cv[0];
    let apply = |b: &ddchan_core::linalg::CMatrix| -> Vec<f64> {
        (0..b.nrows())
            .map(|r| (0..b.ncols()).map(|c| b[(r, c)] * cv[c]).sum::<ddchan_core::C64>().norm())
            .collect()
    };
    let dft = apply(&dft_matrix(l));
    let opt = apply(fam.matrix(0));
    let mut out = vec![l as f64];
    out.extend(&dft);
    out.extend(&opt);
    out.push(dft.iter().sum());
    out.push(opt.iter().sum());
    Ok(out)
}

#[wasm_bindgen(js_name = kernels)]
pub fn kernels_js(rolloff: f64, tau: f64, offset: f64, n_r: usize, half: usize) -> Result<Vec<f64>, JsError> {
    kernels(rolloff, tau, offset, n_r, half).map_err(js_err)
}

#[wasm_bindgen(js_name = varthetaProfiles)]
pub fn vartheta_profiles_js(n_r: usize, nu_max_bins: f64, j1: usize, nu_bins: f64) -> Result<Vec<f64>, JsError> {
    vartheta_profiles(n_r, nu_max_bins, j1, nu_bins).map_err(js_err)
}

#[wasm_bindgen(js_name = basisCoefficients)]
pub fn basis_coefficients_js(k: usize, l: usize, nu_max_bins: f64, nu_bins: f64, iters: usize) -> Result<Vec<f64>, JsError> {
    basis_coefficients(k, l, nu_max_bins, nu_bins, iters).map_err(js_err)
}
