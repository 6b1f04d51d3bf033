//! Prior-weighted c-vectors for statistically optimized bases.

use super::dft::DopplerGrid;
use crate::channel::{phi_kernel, FilterModel};
use crate::error::{Error, Result};
use crate::C64;

/// Scatterer prior on a (delay, Doppler) quadrature grid: density `pdf`
/// and gain variance `variance`, both row-major in (delay node, Doppler node).
#[derive(Debug, Clone, PartialEq)]
pub struct StatPrior {
    pub delays: Vec<f64>,
    pub delay_weights: Vec<f64>,
    pub dopplers: Vec<f64>,
    pub doppler_weights: Vec<f64>,
    pub pdf: Vec<f64>,
    pub variance: Vec<f64>,
}

impl StatPrior {
    pub fn new(
        delays: Vec<f64>,
        delay_weights: Vec<f64>,
        dopplers: Vec<f64>,
        doppler_weights: Vec<f64>,
        pdf: Vec<f64>,
        variance: Vec<f64>,
    ) -> Result<Self> {
        let n = delays.len() * dopplers.len();
        if delay_weights.len() != delays.len() || doppler_weights.len() != dopplers.len() {
            return Err(Error::invalid("quadrature weights must match their nodes"));
        }
        if pdf.len() != n || variance.len() != n {
            return Err(Error::mismatch("StatPrior::new", n, pdf.len().min(variance.len())));
        }
        if pdf.iter().chain(&variance).any(|v| !(*v >= 0.0)) {
            return Err(Error::invalid("pdf and variance must be nonnegative"));
        }
        if dopplers.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("Doppler nodes must be increasing"));
        }
        let prior = StatPrior {
            delays,
            delay_weights,
            dopplers,
            doppler_weights,
            pdf,
            variance,
        };
        let mass = prior.total_mass();
        if mass == 0.0 {
            return Err(Error::Degenerate("prior has no mass".into()));
        }
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(format!("prior integrates to {mass}, not 1")));
        }
        Ok(prior)
    }

    pub fn total_mass(&self) -> f64 {
        let nd = self.dopplers.len();
        let mut s = 0.0;
        for (t, wt) in self.delay_weights.iter().enumerate() {
            for (v, wv) in self.doppler_weights.iter().enumerate() {
                s += wt * wv * self.pdf[t * nd + v];
            }
        }
        s
    }

    /// Uniform density over `[delay_lo, delay_hi]` (midpoint rule with
    /// `delay_nodes` nodes) times the union of Doppler `bands`, on the
    /// frequencies of `grid`; constant gain variance.
    pub fn uniform(
        delay_lo: f64,
        delay_hi: f64,
        delay_nodes: usize,
        bands: &[(f64, f64)],
        grid: &DopplerGrid,
        variance: f64,
    ) -> Result<Self> {
        if delay_nodes == 0 || !(delay_hi >= delay_lo) {
            return Err(Error::invalid("uniform prior needs a nonempty delay interval"));
        }
        let width = (delay_hi - delay_lo) / delay_nodes as f64;
        let delays: Vec<f64> = (0..delay_nodes).map(|t| delay_lo + (t as f64 + 0.5) * width).collect();
        let delay_weights = vec![if width > 0.0 { width } else { 1.0 }; delay_nodes];
        let dopplers = grid.frequencies();
        let doppler_weights = vec![grid.nu_delta; dopplers.len()];
        let tol = 1e-9 * grid.nu_delta;
        let inside: Vec<bool> = dopplers
            .iter()
            .map(|&nu| bands.iter().any(|&(lo, hi)| nu >= lo - tol && nu <= hi + tol))
            .collect();
        let nd = dopplers.len();
        let mut pdf = vec![0.0; delay_nodes * nd];
        for t in 0..delay_nodes {
            for v in 0..nd {
                if inside[v] {
                    pdf[t * nd + v] = 1.0;
                }
            }
        }
        let mass: f64 = (0..delay_nodes)
            .map(|t| (0..nd).map(|v| delay_weights[t] * doppler_weights[v] * pdf[t * nd + v]).sum::<f64>())
            .sum();
        if mass == 0.0 {
            return Err(Error::Degenerate("no Doppler grid node inside the prior bands".into()));
        }
        pdf.iter_mut().for_each(|p| *p /= mass);
        Self::new(
            delays,
            delay_weights,
            dopplers,
            doppler_weights,
            pdf,
            vec![variance; delay_nodes * nd],
        )
    }

    fn weight_at_node(&self, v: usize, model: FilterModel, m: usize) -> f64 {
        let nd = self.dopplers.len();
        let nu = self.dopplers[v];
        self.delays
            .iter()
            .enumerate()
            .map(|(t, &tau)| {
                let idx = t * nd + v;
                self.delay_weights[t]
                    * self.variance[idx].sqrt()
                    * phi_kernel(model, nu, m as f64 - tau).abs()
                    * self.pdf[idx]
            })
            .sum()
    }
}

/// `G^{(nu)}[m] = sum_t w_t sigma(tau_t, nu) |phi(m - tau_t)| p(tau_t, nu)` for
/// every frequency of `grid` (outer index) and `m < d` (inner index).
/// Frequencies between prior nodes are linearly interpolated; outside the
/// node range the weight is zero.
pub fn stat_weights(prior: &StatPrior, model: FilterModel, d: usize, grid: &DopplerGrid) -> Result<Vec<Vec<f64>>> {
    if prior.pdf.iter().all(|&p| p == 0.0) {
        return Err(Error::Degenerate("prior has no mass".into()));
    }
    let tol = 1e-9 * grid.nu_delta;
    let nodes = &prior.dopplers;
    let mut out = Vec::with_capacity(grid.len());
    for nu in grid.frequencies() {
        let row: Vec<f64> = if let Some(v) = nodes.iter().position(|&x| (x - nu).abs() <= tol) {
            (0..d).map(|m| prior.weight_at_node(v, model, m)).collect()
        } else if let Some(v) = nodes.windows(2).position(|w| w[0] < nu && nu < w[1]) {
            let a = (nu - nodes[v]) / (nodes[v + 1] - nodes[v]);
            (0..d)
                .map(|m| (1.0 - a) * prior.weight_at_node(v, model, m) + a * prior.weight_at_node(v + 1, model, m))
                .collect()
        } else {
            vec![0.0; d]
        };
        out.push(row);
    }
    Ok(out)
}

/// `c~_m^{(nu)} = G^{(nu)}[m] c_m^{(nu)}` for each delay.
pub fn weight_c_vectors(sets: &[Vec<Vec<C64>>], weights: &[Vec<f64>]) -> Result<Vec<Vec<Vec<C64>>>> {
    sets.iter()
        .enumerate()
        .map(|(m, cs)| {
            if cs.len() != weights.len() {
                return Err(Error::mismatch("weight_c_vectors", weights.len(), cs.len()));
            }
            Ok(cs
                .iter()
                .zip(weights)
                .map(|(c, w)| c.iter().map(|v| v * w[m]).collect())
                .collect())
        })
        .collect()
}
