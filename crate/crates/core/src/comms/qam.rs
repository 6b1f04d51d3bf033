//! Gray-mapped 4-QAM with unit average energy.

use crate::C64;

const A: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Bit pair `(b0, b1)` to `((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)`.
pub fn qam_map(bits: &[u8]) -> Vec<C64> {
    bits.chunks(2)
        .map(|p| {
            let b1 = p.get(1).copied().unwrap_or(0);
            C64::new(A * (1.0 - 2.0 * p[0] as f64), A * (1.0 - 2.0 * b1 as f64))
        })
        .collect()
}

/// Nearest constellation point.
pub fn qam_decide(z: C64) -> C64 {
    C64::new(if z.re < 0.0 { -A } else { A }, if z.im < 0.0 { -A } else { A })
}

pub fn qam_demap_hard(symbols: &[C64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|z| [(z.re < 0.0) as u8, (z.im < 0.0) as u8])
        .collect()
}

/// Bit log-likelihood ratios `log P(b=0)/P(b=1)` for noise variance
/// `noise_var` per complex symbol.
pub fn qam_llr(symbols: &[C64], noise_var: f64) -> Vec<f64> {
    let s = 4.0 * A / noise_var.max(1e-300);
    symbols.iter().flat_map(|z| [s * z.re, s * z.im]).collect()
}

/// Uniformly random unit-energy 4-QAM symbol.
pub fn qam_random<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let re = if rng.random::<bool>() { A } else { -A };
    let im = if rng.random::<bool>() { A } else { -A };
    C64::new(re, im)
}
