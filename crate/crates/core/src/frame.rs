//! Pulse-shaping multicarrier modulation and demodulation.

use crate::error::{Error, Result};
use crate::linalg::{cis2pi, FftPair};
use crate::C64;

/// Frame geometry and the transmit/receive pulse pair.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    k: usize,
    n: usize,
    l: usize,
    g: Vec<C64>,
    gamma: Vec<C64>,
}

impl McConfig {
    /// General pulse pair. `gamma` is supported on `0..gamma.len()`, so the
    /// receive window is `(L-1)N + gamma.len()` samples long.
    pub fn new(k: usize, n: usize, l: usize, g: Vec<C64>, gamma: Vec<C64>) -> Result<Self> {
        if k == 0 || n == 0 || l == 0 {
            return Err(Error::invalid("K, N and L must be positive"));
        }
        if n < k {
            return Err(Error::invalid(format!("N = {n} is smaller than K = {k}")));
        }
        if l % 2 != 0 {
            return Err(Error::invalid(format!("L = {l} must be even")));
        }
        if g.is_empty() || gamma.is_empty() {
            return Err(Error::invalid("pulses must be nonempty"));
        }
        Ok(McConfig { k, n, l, g, gamma })
    }

    /// CP-OFDM: rectangular transmit pulse of length N, receive pulse 1/K on
    /// the last K samples of the symbol interval.
    pub fn cp_ofdm(k: usize, n: usize, l: usize) -> Result<Self> {
        if k == 0 || n == 0 || l == 0 {
            return Err(Error::invalid("K, N and L must be positive"));
        }
        if n < k {
            return Err(Error::invalid(format!("N = {n} is smaller than K = {k}")));
        }
        let g = vec![C64::new(1.0, 0.0); n];
        let mut gamma = vec![C64::new(0.0, 0.0); n];
        for v in gamma.iter_mut().skip(n - k) {
            *v = C64::new(1.0 / k as f64, 0.0);
        }
        Self::new(k, n, l, g, gamma)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn g(&self) -> &[C64] {
        &self.g
    }

    pub fn gamma(&self) -> &[C64] {
        &self.gamma
    }

    pub fn cp_len(&self) -> usize {
        self.n - self.k
    }

    pub fn n_r(&self) -> usize {
        (self.l - 1) * self.n + self.gamma.len()
    }

    /// `g[n]`, zero outside the stored support.
    pub fn g_at(&self, n: i64) -> C64 {
        if n < 0 || n as usize >= self.g.len() {
            C64::new(0.0, 0.0)
        } else {
            self.g[n as usize]
        }
    }

    pub fn gamma_at(&self, n: i64) -> C64 {
        if n < 0 || n as usize >= self.gamma.len() {
            C64::new(0.0, 0.0)
        } else {
            self.gamma[n as usize]
        }
    }
}

/// An L x K grid of symbols, row-major in (l, k).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    l: usize,
    k: usize,
    values: Vec<C64>,
}

impl SymbolGrid {
    pub fn zeros(l: usize, k: usize) -> Self {
        SymbolGrid {
            l,
            k,
            values: vec![C64::new(0.0, 0.0); l * k],
        }
    }

    pub fn from_vec(l: usize, k: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != l * k {
            return Err(Error::mismatch("SymbolGrid::from_vec", l * k, values.len()));
        }
        Ok(SymbolGrid { l, k, values })
    }

    pub fn for_config(cfg: &McConfig) -> Self {
        Self::zeros(cfg.l(), cfg.k())
    }

    pub fn rows(&self) -> usize {
        self.l
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn get(&self, l: usize, k: usize) -> C64 {
        self.values[l * self.k + k]
    }

    pub fn set(&mut self, l: usize, k: usize, v: C64) {
        self.values[l * self.k + k] = v;
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn row(&self, l: usize) -> &[C64] {
        &self.values[l * self.k..(l + 1) * self.k]
    }

    fn check(&self, cfg: &McConfig, context: &'static str) -> Result<()> {
        if self.l != cfg.l() {
            return Err(Error::mismatch(context, cfg.l(), self.l));
        }
        if self.k != cfg.k() {
            return Err(Error::mismatch(context, cfg.k(), self.k));
        }
        Ok(())
    }
}

/// `s[n] = sum_{l,k} a_{l,k} g[n-lN] e^{j2pi k(n-lN)/K}` on `0..N_r`.
pub fn modulate(grid: &SymbolGrid, cfg: &McConfig) -> Result<Vec<C64>> {
    grid.check(cfg, "modulate")?;
    let (k, n, n_r) = (cfg.k(), cfg.n(), cfg.n_r());
    let fft = FftPair::new(k);
    let mut s = vec![C64::new(0.0, 0.0); n_r];
    let mut buf = vec![C64::new(0.0, 0.0); k];
    for l in 0..cfg.l() {
        buf.copy_from_slice(grid.row(l));
        fft.inverse(&mut buf);
        let start = l * n;
        for (np, gv) in cfg.g().iter().enumerate() {
            let idx = start + np;
            if idx >= n_r {
                break;
            }
            s[idx] += gv * buf[np % k];
        }
    }
    Ok(s)
}

/// `r_{l,k} = sum_n r[n] gamma*[n-lN] e^{-j2pi k(n-lN)/K}` over `n < N_r`.
pub fn demodulate(r: &[C64], cfg: &McConfig) -> Result<SymbolGrid> {
    let n_r = cfg.n_r();
    if r.len() < n_r {
        return Err(Error::mismatch("demodulate", n_r, r.len()));
    }
    let (k, n) = (cfg.k(), cfg.n());
    let fft = FftPair::new(k);
    let mut out = SymbolGrid::for_config(cfg);
    let mut buf = vec![C64::new(0.0, 0.0); k];
    for l in 0..cfg.l() {
        buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let start = l * n;
        for (np, gv) in cfg.gamma().iter().enumerate() {
            let idx = start + np;
            if idx >= n_r {
                break;
            }
            buf[np % k] += r[idx] * gv.conj();
        }
        fft.forward(&mut buf);
        out.values_mut()[l * k..(l + 1) * k].copy_from_slice(&buf);
    }
    Ok(out)
}

/// `A(m, xi) = sum_n gamma[n] g*[n-m] e^{-j2pi xi n}`.
pub fn cross_ambiguity(cfg: &McConfig, m: i64, xi: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (n, gv) in cfg.gamma().iter().enumerate() {
        let t = cfg.g_at(n as i64 - m);
        if t.re == 0.0 && t.im == 0.0 {
            continue;
        }
        acc += gv * t.conj() * cis2pi(-xi * n as f64);
    }
    acc
}

/// `A(m, j/len)` for `j = 0..len`, via one FFT. `len` must cover the
/// receive-pulse support.
pub fn ambiguity_row(cfg: &McConfig, m: i64, fft: &FftPair) -> Vec<C64> {
    let len = fft.len;
    let mut buf = vec![C64::new(0.0, 0.0); len];
    for (n, gv) in cfg.gamma().iter().enumerate() {
        buf[n % len] += gv * cfg.g_at(n as i64 - m).conj();
    }
    fft.forward(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cp_ofdm_geometry() {
        let cfg = McConfig::cp_ofdm(512, 640, 16).unwrap();
        assert_eq!(cfg.n_r(), 10240);
        assert_eq!(cfg.cp_len(), 128);
        let cfg = McConfig::cp_ofdm(2048, 2560, 16).unwrap();
        assert_eq!(cfg.n_r(), 40960);
        let cfg = McConfig::cp_ofdm(4, 4, 2).unwrap();
        assert_eq!(cfg.cp_len(), 0);
        assert!(cfg.gamma().iter().all(|v| *v == c(0.25, 0.0)));
    }

    #[test]
    fn cp_ofdm_rejects_bad_geometry() {
        assert!(McConfig::cp_ofdm(8, 4, 2).is_err());
        assert!(McConfig::cp_ofdm(4, 5, 3).is_err());
        assert!(McConfig::cp_ofdm(0, 5, 2).is_err());
    }

    #[test]
    fn single_symbol_gives_transmit_pulse() {
        let cfg = McConfig::cp_ofdm(4, 5, 2).unwrap();
        let mut grid = SymbolGrid::for_config(&cfg);
        grid.set(0, 0, c(1.0, 0.0));
        let s = modulate(&grid, &cfg).unwrap();
        for (n, v) in s.iter().enumerate() {
            let want = if n < 5 { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn first_subcarrier_tone() {
        let cfg = McConfig::cp_ofdm(4, 4, 2).unwrap();
        let mut grid = SymbolGrid::for_config(&cfg);
        grid.set(0, 1, c(1.0, 0.0));
        let s = modulate(&grid, &cfg).unwrap();
        for (n, v) in s.iter().enumerate() {
            let want = if n < 4 { cis2pi(n as f64 / 4.0) } else { c(0.0, 0.0) };
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn demodulate_single_tone() {
        let cfg = McConfig::cp_ofdm(8, 10, 2).unwrap();
        let k0 = 3;
        let mut r = vec![c(0.0, 0.0); cfg.n_r()];
        for (n, v) in r.iter_mut().enumerate().take(cfg.n()) {
            *v = cis2pi((k0 * n) as f64 / 8.0);
        }
        let grid = demodulate(&r, &cfg).unwrap();
        for k in 0..8 {
            let want = if k == k0 { 1.0 } else { 0.0 };
            assert!((grid.get(0, k) - c(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn demodulate_rejects_short_input() {
        let cfg = McConfig::cp_ofdm(4, 4, 2).unwrap();
        assert!(demodulate(&[c(0.0, 0.0); 7], &cfg).is_err());
    }

    #[test]
    fn cp_absorbs_small_delays() {
        let cfg = McConfig::cp_ofdm(16, 20, 2).unwrap();
        assert!((cross_ambiguity(&cfg, 0, 0.0) - c(1.0, 0.0)).norm() < 1e-14);
        for m in 0..=4 {
            assert!((cross_ambiguity(&cfg, m, 0.0) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert_eq!(cross_ambiguity(&cfg, 40, 0.1), c(0.0, 0.0));
        assert_eq!(cross_ambiguity(&cfg, -40, 0.1), c(0.0, 0.0));
    }

    #[test]
    fn ambiguity_row_matches_direct_evaluation() {
        let cfg = McConfig::cp_ofdm(8, 10, 4).unwrap();
        let fft = FftPair::new(cfg.n_r());
        for m in [0i64, 2, 5, 9] {
            let row = ambiguity_row(&cfg, m, &fft);
            for j in [0usize, 1, 7, 39] {
                let want = cross_ambiguity(&cfg, m, j as f64 / cfg.n_r() as f64);
                assert!((row[j] - want).norm() < 1e-12);
            }
        }
    }
}
