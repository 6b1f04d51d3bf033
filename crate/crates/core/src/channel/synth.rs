//! Specular and diffuse channel synthesis, spreading function, AWGN.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::kernels::{phi_kernel, FilterModel};
use crate::error::{Error, Result};
use crate::frame::McConfig;
use crate::linalg::{cis2pi, FftPair};
use crate::C64;

/// One specular path: delay in samples, Doppler in cycles/sample, gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererPath {
    pub delay_norm: f64,
    pub doppler_norm: f64,
    pub gain: C64,
}

/// Discrete time-varying impulse response `h[n, m]`, `n < N_r`, `m < m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n_r: usize,
    m_max: usize,
    // row-major in (n, m)
    h: Vec<C64>,
}

impl ChannelRealization {
    pub fn zeros(n_r: usize, m_max: usize) -> Self {
        ChannelRealization {
            n_r,
            m_max,
            h: vec![C64::new(0.0, 0.0); n_r * m_max],
        }
    }

    pub fn from_fn(n_r: usize, m_max: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut h = Vec::with_capacity(n_r * m_max);
        for n in 0..n_r {
            for m in 0..m_max {
                h.push(f(n, m));
            }
        }
        ChannelRealization { n_r, m_max, h }
    }

    /// Time-invariant channel with the given taps.
    pub fn time_invariant(n_r: usize, taps: &[C64]) -> Self {
        Self::from_fn(n_r, taps.len(), |_, m| taps[m])
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn get(&self, n: usize, m: usize) -> C64 {
        self.h[n * self.m_max + m]
    }

    pub fn set(&mut self, n: usize, m: usize, v: C64) {
        self.h[n * self.m_max + m] = v;
    }

    pub fn values(&self) -> &[C64] {
        &self.h
    }

    /// Elementwise sum; delay supports are padded to the larger one.
    pub fn add(&self, other: &ChannelRealization) -> Result<ChannelRealization> {
        if self.n_r != other.n_r {
            return Err(Error::mismatch("ChannelRealization::add", self.n_r, other.n_r));
        }
        let m_max = self.m_max.max(other.m_max);
        Ok(Self::from_fn(self.n_r, m_max, |n, m| {
            let a = if m < self.m_max { self.get(n, m) } else { C64::new(0.0, 0.0) };
            let b = if m < other.m_max { other.get(n, m) } else { C64::new(0.0, 0.0) };
            a + b
        }))
    }

    pub fn energy(&self) -> f64 {
        self.h.iter().map(|v| v.norm_sqr()).sum()
    }
}

fn check_path(p: &ScattererPath, max_delay: f64, max_doppler: f64) -> Result<()> {
    let tol = 1e-12;
    if !(p.delay_norm >= 0.0 && p.delay_norm <= max_delay + tol) {
        return Err(Error::invalid(format!(
            "path delay {} outside [0, {max_delay}]",
            p.delay_norm
        )));
    }
    if !(p.doppler_norm.abs() <= max_doppler + tol) {
        return Err(Error::invalid(format!(
            "path Doppler {} outside +-{max_doppler}",
            p.doppler_norm
        )));
    }
    Ok(())
}

/// `h[n,m] = sum_p eta_p phi(m - tau_p) e^{j2pi nu_p n}` on `n < N_r`, `m < m_max`.
/// Delays must lie in `[0, m_max-1]` and Dopplers in `[-max_doppler, max_doppler]`.
pub fn synth_specular(
    paths: &[ScattererPath],
    model: FilterModel,
    cfg: &McConfig,
    m_max: usize,
    max_doppler: f64,
) -> Result<ChannelRealization> {
    if m_max == 0 {
        return Err(Error::invalid("m_max must be positive"));
    }
    let n_r = cfg.n_r();
    let mut ch = ChannelRealization::zeros(n_r, m_max);
    let mut taps = vec![0.0; m_max];
    let mut tone = vec![C64::new(0.0, 0.0); n_r];
    for p in paths {
        check_path(p, (m_max - 1) as f64, max_doppler)?;
        for (m, t) in taps.iter_mut().enumerate() {
            *t = phi_kernel(model, p.doppler_norm, m as f64 - p.delay_norm);
        }
        for (n, v) in tone.iter_mut().enumerate() {
            *v = p.gain * cis2pi(p.doppler_norm * n as f64);
        }
        for n in 0..n_r {
            let row = &mut ch.h[n * m_max..(n + 1) * m_max];
            for (m, t) in taps.iter().enumerate() {
                if *t != 0.0 {
                    row[m] += tone[n] * *t;
                }
            }
        }
    }
    Ok(ch)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

/// Brick-shaped diffuse scattering: delays `0..delay_span`, Dopplers within
/// `+-max_doppler`, total mean power `power_db_below` dB below unit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffuseSpec {
    pub delay_span: usize,
    pub max_doppler: f64,
    /// `f64::INFINITY` disables the diffuse part.
    pub power_db_below: f64,
}

/// Diffuse part as a lattice of i.i.d. complex Gaussian scatterers at integer
/// delays and canonical Dopplers `d/N_r`, which spreads power evenly over the
/// brick without leakage.
pub fn synth_diffuse<R: Rng + ?Sized>(
    spec: &DiffuseSpec,
    rng: &mut R,
    cfg: &McConfig,
) -> Result<ChannelRealization> {
    let n_r = cfg.n_r();
    if spec.delay_span == 0 {
        return Err(Error::invalid("diffuse delay span must be nonempty"));
    }
    if !(spec.max_doppler >= 0.0) {
        return Err(Error::invalid("diffuse Doppler span must be nonnegative"));
    }
    let mut ch = ChannelRealization::zeros(n_r, spec.delay_span);
    if spec.power_db_below.is_infinite() && spec.power_db_below > 0.0 {
        return Ok(ch);
    }
    let d_max = (spec.max_doppler * n_r as f64 + 1e-9).floor() as i64;
    let count = spec.delay_span * (2 * d_max as usize + 1);
    let var = 10f64.powf(-spec.power_db_below / 10.0) / count as f64;
    let tones: Vec<Vec<C64>> = (-d_max..=d_max)
        .map(|d| (0..n_r).map(|n| cis2pi((d * n as i64) as f64 / n_r as f64)).collect())
        .collect();
    for m in 0..spec.delay_span {
        for tone in &tones {
            let eta = complex_gaussian(rng, var);
            for (n, t) in tone.iter().enumerate() {
                ch.h[n * spec.delay_span + m] += eta * t;
            }
        }
    }
    Ok(ch)
}

/// Random specular ensemble: classes of (count, relative power in dB), with
/// variances rescaled so the mean total power is one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScattererEnsemble {
    pub classes: Vec<(usize, f64)>,
    pub max_delay: f64,
    /// Doppler draws are uniform over `[lo, hi] U [-hi, -lo]`; `lo = 0` gives
    /// the full symmetric interval.
    pub doppler_lo: f64,
    pub doppler_hi: f64,
    pub integer_delays: bool,
}

impl ScattererEnsemble {
    /// 20 paths: 3 strong, 7 at -10 dB, 10 at -20 dB.
    pub fn standard(max_delay: f64, max_doppler: f64) -> Self {
        ScattererEnsemble {
            classes: vec![(3, 0.0), (7, -10.0), (10, -20.0)],
            max_delay,
            doppler_lo: 0.0,
            doppler_hi: max_doppler,
            integer_delays: false,
        }
    }

    pub fn path_count(&self) -> usize {
        self.classes.iter().map(|c| c.0).sum()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<ScattererPath> {
        let total: f64 = self
            .classes
            .iter()
            .map(|&(c, db)| c as f64 * 10f64.powf(db / 10.0))
            .sum();
        let mut out = Vec::with_capacity(self.path_count());
        for &(count, db) in &self.classes {
            let var = 10f64.powf(db / 10.0) / total;
            for _ in 0..count {
                let delay_norm = if self.integer_delays {
                    rng.random_range(0..=self.max_delay.floor() as i64) as f64
                } else {
                    rng.random::<f64>() * self.max_delay
                };
                let mag = self.doppler_lo + rng.random::<f64>() * (self.doppler_hi - self.doppler_lo);
                let doppler_norm = if rng.random::<bool>() { mag } else { -mag };
                out.push(ScattererPath {
                    delay_norm,
                    doppler_norm,
                    gain: complex_gaussian(rng, var),
                });
            }
        }
        out
    }
}

/// Delay-Doppler spreading function, row-major in (m, i), `i < N_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingFunction {
    n_r: usize,
    m_max: usize,
    s: Vec<C64>,
}

impl SpreadingFunction {
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `S[m, i]` with `i` taken modulo N_r.
    pub fn get(&self, m: usize, i: i64) -> C64 {
        self.s[m * self.n_r + i.rem_euclid(self.n_r as i64) as usize]
    }

    pub fn doppler_profile(&self, m: usize) -> &[C64] {
        &self.s[m * self.n_r..(m + 1) * self.n_r]
    }
}

/// `S[m,i] = (1/N_r) sum_n h[n,m] e^{-j2pi i n / N_r}`.
pub fn spreading(h: &ChannelRealization) -> SpreadingFunction {
    let (n_r, m_max) = (h.n_r, h.m_max);
    let fft = FftPair::new(n_r);
    let mut s = vec![C64::new(0.0, 0.0); n_r * m_max];
    let mut buf = vec![C64::new(0.0, 0.0); n_r];
    for m in 0..m_max {
        for (n, b) in buf.iter_mut().enumerate() {
            *b = h.get(n, m) / n_r as f64;
        }
        fft.forward(&mut buf);
        s[m * n_r..(m + 1) * n_r].copy_from_slice(&buf);
    }
    SpreadingFunction { n_r, m_max, s }
}

/// Inverse of [`spreading`].
pub fn inverse_spreading(s: &SpreadingFunction) -> ChannelRealization {
    let (n_r, m_max) = (s.n_r, s.m_max);
    let fft = FftPair::new(n_r);
    let mut h = ChannelRealization::zeros(n_r, m_max);
    let mut buf = vec![C64::new(0.0, 0.0); n_r];
    for m in 0..m_max {
        buf.copy_from_slice(s.doppler_profile(m));
        fft.inverse(&mut buf);
        for (n, b) in buf.iter().enumerate() {
            h.set(n, m, *b);
        }
    }
    h
}

/// `sum_m h[n,m] s[n-m]` for `n < N_r`.
pub fn apply_channel(s: &[C64], h: &ChannelRealization) -> Vec<C64> {
    let n_r = h.n_r;
    let mut r = vec![C64::new(0.0, 0.0); n_r];
    for (n, out) in r.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..h.m_max.min(n + 1) {
            if let Some(sv) = s.get(n - m) {
                acc += h.get(n, m) * sv;
            }
        }
        *out = acc;
    }
    r
}

/// Noise variance that puts the empirical receive SNR of `clean` at `snr_db`.
pub fn noise_variance_for(clean: &[C64], snr_db: f64) -> f64 {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return 0.0;
    }
    let p = clean.iter().map(|v| v.norm_sqr()).sum::<f64>() / clean.len().max(1) as f64;
    p / 10f64.powf(snr_db / 10.0)
}

pub fn add_awgn<R: Rng + ?Sized>(clean: &[C64], noise_var: f64, rng: &mut R) -> Vec<C64> {
    if noise_var == 0.0 {
        return clean.to_vec();
    }
    clean.iter().map(|v| v + complex_gaussian(rng, noise_var)).collect()
}

/// Channel output plus white Gaussian noise at the given receive SNR
/// (`f64::INFINITY` disables the noise).
pub fn apply_channel_awgn<R: Rng + ?Sized>(
    s: &[C64],
    h: &ChannelRealization,
    snr_db: f64,
    rng: &mut R,
) -> Vec<C64> {
    let clean = apply_channel(s, h);
    let var = noise_variance_for(&clean, snr_db);
    add_awgn(&clean, var, rng)
}
