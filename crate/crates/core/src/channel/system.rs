//! Equivalent system-channel coefficients `H_{l,k;l',k'}` between transmit
//! symbol `(l',k')` and demodulated symbol `(l,k)`.

use super::synth::{ChannelRealization, SpreadingFunction};
use crate::error::{Error, Result};
use crate::frame::{ambiguity_row, McConfig, SymbolGrid};
use crate::linalg::{cis2pi, FftPair};
use crate::C64;

/// Folded coefficients `F[m, i]`, `m < D`, `i` in `-P/2..P/2` for an even
/// Doppler period `P`; row-major in (m, i + P/2).
#[derive(Debug, Clone, PartialEq)]
pub struct FCoefficients {
    d: usize,
    period: usize,
    data: Vec<C64>,
}

impl FCoefficients {
    pub fn zeros(d: usize, period: usize) -> Self {
        FCoefficients {
            d,
            period,
            data: vec![C64::new(0.0, 0.0); d * period],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn get(&self, m: usize, i: i64) -> C64 {
        self.data[m * self.period + (i + self.period as i64 / 2) as usize]
    }

    pub fn set(&mut self, m: usize, i: i64, v: C64) {
        self.data[m * self.period + (i + self.period as i64 / 2) as usize] = v;
    }

    pub fn values(&self) -> &[C64] {
        &self.data
    }
}

/// `F[m,i] = sum_q S[m, i+qL] A*(m, (i+qL)/N_r)` for `m < D`, `i` in `-L/2..L/2`.
pub fn fold_to_f(s: &SpreadingFunction, cfg: &McConfig, d: usize) -> Result<FCoefficients> {
    let n_r = cfg.n_r();
    if s.n_r() != n_r {
        return Err(Error::mismatch("fold_to_f", n_r, s.n_r()));
    }
    let l = cfg.l();
    if n_r % l != 0 {
        return Err(Error::invalid("fold_to_f needs N_r to be a multiple of L"));
    }
    let fft = FftPair::new(n_r);
    let mut f = FCoefficients::zeros(d, l);
    for m in 0..d.min(s.m_max()) {
        let amb = ambiguity_row(cfg, m as i64, &fft);
        for i in -(l as i64) / 2..(l as i64) / 2 {
            let mut acc = C64::new(0.0, 0.0);
            for q in 0..(n_r / l) as i64 {
                let j = i + q * l as i64;
                acc += s.get(m, j) * amb[j.rem_euclid(n_r as i64) as usize].conj();
            }
            f.set(m, i, acc);
        }
    }
    Ok(f)
}

/// `H_{l,k} = sum_m sum_i F[m,i] e^{-j2pi(km/K - li/L)}` on the full L x K grid.
/// `F` may use a shorter Doppler period than L; missing bins are zero.
pub fn synthesize_from_f(f: &FCoefficients, cfg: &McConfig) -> Result<SymbolGrid> {
    let (k, l) = (cfg.k(), cfg.l());
    if f.d() > k {
        return Err(Error::mismatch("synthesize_from_f", k, f.d()));
    }
    let half = f.period() as i64 / 2;
    let fft = FftPair::new(k);
    let mut out = SymbolGrid::for_config(cfg);
    let mut buf = vec![C64::new(0.0, 0.0); k];
    for li in 0..l {
        buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (m, b) in buf.iter_mut().enumerate().take(f.d()) {
            let mut acc = C64::new(0.0, 0.0);
            for i in -half..half {
                acc += f.get(m, i) * cis2pi((li as i64 * i) as f64 / l as f64);
            }
            *b = acc;
        }
        fft.forward(&mut buf);
        out.values_mut()[li * k..(li + 1) * k].copy_from_slice(&buf);
    }
    Ok(out)
}

/// Banded system-channel coefficients: for each `(l,k)` the entries
/// `H_{l,k; l+dl, (k+dk) mod K}` with `|dl| <= l_max`, `|dk| <= k_max`.
/// Entries whose `l+dl` falls outside the block are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedChannel {
    l: usize,
    k: usize,
    l_max: usize,
    k_max: usize,
    data: Vec<C64>,
}

impl BandedChannel {
    pub fn zeros(l: usize, k: usize, l_max: usize, k_max: usize) -> Self {
        let w = (2 * l_max + 1) * (2 * k_max + 1);
        BandedChannel {
            l,
            k,
            l_max,
            k_max,
            data: vec![C64::new(0.0, 0.0); l * k * w],
        }
    }

    pub fn rows(&self) -> usize {
        self.l
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    fn index(&self, l: usize, k: usize, dl: i64, dk: i64) -> usize {
        let wl = 2 * self.l_max + 1;
        let wk = 2 * self.k_max + 1;
        ((l * self.k + k) * wl + (dl + self.l_max as i64) as usize) * wk + (dk + self.k_max as i64) as usize
    }

    pub fn get(&self, l: usize, k: usize, dl: i64, dk: i64) -> C64 {
        self.data[self.index(l, k, dl, dk)]
    }

    pub fn set(&mut self, l: usize, k: usize, dl: i64, dk: i64, v: C64) {
        let i = self.index(l, k, dl, dk);
        self.data[i] = v;
    }

    pub fn values(&self) -> &[C64] {
        &self.data
    }

    /// The diagonal `H_{l,k;l,k}` as a grid.
    pub fn diagonal(&self) -> SymbolGrid {
        let mut g = SymbolGrid::zeros(self.l, self.k);
        for l in 0..self.l {
            for k in 0..self.k {
                g.set(l, k, self.get(l, k, 0, 0));
            }
        }
        g
    }

    /// Band-limited channel with only the diagonal populated.
    pub fn from_diagonal(diag: &SymbolGrid, l_max: usize, k_max: usize) -> Self {
        let mut b = Self::zeros(diag.rows(), diag.cols(), l_max, k_max);
        for l in 0..diag.rows() {
            for k in 0..diag.cols() {
                b.set(l, k, 0, 0, diag.get(l, k));
            }
        }
        b
    }

    /// `r_{l,k} = sum_{band} H_{l,k;l',k'} a_{l',k'}`.
    pub fn apply(&self, a: &SymbolGrid) -> SymbolGrid {
        let mut out = SymbolGrid::zeros(self.l, self.k);
        for l in 0..self.l {
            for k in 0..self.k {
                let mut acc = C64::new(0.0, 0.0);
                for dl in -(self.l_max as i64)..=self.l_max as i64 {
                    let lp = l as i64 + dl;
                    if lp < 0 || lp >= self.l as i64 {
                        continue;
                    }
                    for dk in -(self.k_max as i64)..=self.k_max as i64 {
                        let kp = (k as i64 + dk).rem_euclid(self.k as i64) as usize;
                        acc += self.get(l, k, dl, dk) * a.get(lp as usize, kp);
                    }
                }
                out.set(l, k, acc);
            }
        }
        out
    }

    /// `a_{l',k'} = sum_{band} conj(H_{l,k;l',k'}) r_{l,k}`.
    pub fn apply_adjoint(&self, r: &SymbolGrid) -> SymbolGrid {
        let mut out = SymbolGrid::zeros(self.l, self.k);
        for l in 0..self.l {
            for k in 0..self.k {
                let rv = r.get(l, k);
                if rv.re == 0.0 && rv.im == 0.0 {
                    continue;
                }
                for dl in -(self.l_max as i64)..=self.l_max as i64 {
                    let lp = l as i64 + dl;
                    if lp < 0 || lp >= self.l as i64 {
                        continue;
                    }
                    for dk in -(self.k_max as i64)..=self.k_max as i64 {
                        let kp = (k as i64 + dk).rem_euclid(self.k as i64) as usize;
                        let v = out.get(lp as usize, kp) + self.get(l, k, dl, dk).conj() * rv;
                        out.set(lp as usize, kp, v);
                    }
                }
            }
        }
        out
    }

    /// Squared Frobenius norm over the stored band.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Banded coefficients of the time-varying channel `tap(n, m)`, `m < d`:
///
/// `H_{l,k;l',k'} = e^{-j2pi N k'(l'-l)/K} sum_m e^{-j2pi k'm/K}
///   sum_n gamma*[n] g[n-m-(l'-l)N] tap(n+lN, m) e^{j2pi n(k'-k)/K}`.
///
/// The inner sum is a length-K transform of the folded product sequence.
pub fn banded_from_taps(
    cfg: &McConfig,
    d: usize,
    l_max: usize,
    k_max: usize,
    tap: impl Fn(usize, usize) -> C64,
) -> BandedChannel {
    let fft = FftPair::new(cfg.k());
    let mut out = BandedChannel::zeros(cfg.l(), cfg.k(), l_max, k_max);
    for m in 0..d {
        accumulate_delay(cfg, m, &fft, &mut out, |n| tap(n, m));
    }
    out
}

/// Adds the contribution of delay `m` with time-varying gain `tap(n)` to the
/// band of `out`. `fft` must have length K.
pub fn accumulate_delay(
    cfg: &McConfig,
    m: usize,
    fft: &FftPair,
    out: &mut BandedChannel,
    tap: impl Fn(usize) -> C64,
) {
    let (k, n, l) = (cfg.k(), cfg.n(), cfg.l());
    let (l_max, k_max) = (out.l_max, out.k_max);
    let mut buf = vec![C64::new(0.0, 0.0); k];
    for li in 0..l {
        for dl in -(l_max as i64)..=l_max as i64 {
            let lp = li as i64 + dl;
            if lp < 0 || lp >= l as i64 {
                continue;
            }
            buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            let mut any = false;
            for (np, gm) in cfg.gamma().iter().enumerate() {
                let gv = cfg.g_at(np as i64 - m as i64 - dl * n as i64);
                if gv.re == 0.0 && gv.im == 0.0 || gm.re == 0.0 && gm.im == 0.0 {
                    continue;
                }
                buf[np % k] += gm.conj() * gv * tap(np + li * n);
                any = true;
            }
            if !any {
                continue;
            }
            fft.forward(&mut buf);
            for ki in 0..k {
                for dk in -(k_max as i64)..=k_max as i64 {
                    let kp = (ki as i64 + dk).rem_euclid(k as i64) as usize;
                    let didx = (ki + k - kp) % k;
                    // e^{-j2pi N k' dl / K} e^{-j2pi k' m / K}
                    let turns = (kp as i64 * (n as i64 * dl + m as i64)).rem_euclid(k as i64);
                    let ph = cis2pi(-(turns as f64) / k as f64);
                    let idx = out.index(li, ki, dl, dk);
                    out.data[idx] += ph * buf[didx];
                }
            }
        }
    }
}

/// Exact banded system-channel coefficients of a channel realization,
/// using all its taps.
pub fn banded_coefficients(
    h: &ChannelRealization,
    cfg: &McConfig,
    l_max: usize,
    k_max: usize,
) -> Result<BandedChannel> {
    if h.n_r() != cfg.n_r() {
        return Err(Error::mismatch("banded_coefficients", cfg.n_r(), h.n_r()));
    }
    Ok(banded_from_taps(cfg, h.m_max(), l_max, k_max, |n, m| h.get(n, m)))
}

/// Exact diagonal coefficients `H_{l,k;l,k}`.
pub fn diagonal_coefficients(h: &ChannelRealization, cfg: &McConfig) -> Result<SymbolGrid> {
    if h.n_r() != cfg.n_r() {
        return Err(Error::mismatch("diagonal_coefficients", cfg.n_r(), h.n_r()));
    }
    let (k, n, l) = (cfg.k(), cfg.n(), cfg.l());
    let fft = FftPair::new(k);
    let mut out = SymbolGrid::for_config(cfg);
    let mut buf = vec![C64::new(0.0, 0.0); k];
    for li in 0..l {
        buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (m, b) in buf.iter_mut().enumerate().take(h.m_max().min(k)) {
            let mut acc = C64::new(0.0, 0.0);
            for (np, gm) in cfg.gamma().iter().enumerate() {
                let gv = cfg.g_at(np as i64 - m as i64);
                acc += gm.conj() * gv * h.get(np + li * n, m);
            }
            *b = acc;
        }
        fft.forward(&mut buf);
        out.values_mut()[li * k..(li + 1) * k].copy_from_slice(&buf);
    }
    if h.m_max() > k {
        // delays beyond K alias onto m mod K
        for li in 0..l {
            for m in k..h.m_max() {
                let mut acc = C64::new(0.0, 0.0);
                for (np, gm) in cfg.gamma().iter().enumerate() {
                    acc += gm.conj() * cfg.g_at(np as i64 - m as i64) * h.get(np + li * n, m);
                }
                for ki in 0..k {
                    let v = out.get(li, ki) + acc * cis2pi(-((ki * m) as f64) / k as f64);
                    out.set(li, ki, v);
                }
            }
        }
    }
    Ok(out)
}
