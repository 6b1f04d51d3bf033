//! Iterative decision-directed estimation of the banded ISI/ICI channel with
//! a time-domain basis expansion of the impulse response.

use super::equalizer::{ici_equalize_lsqr, one_tap_equalize};
use super::pilots::PilotSet;
use crate::bases::CombinedBasis;
use crate::channel::{accumulate_delay, banded_from_taps, BandedChannel};
use crate::comms::qam_decide;
use crate::error::{Error, Result};
use crate::frame::{McConfig, SymbolGrid};
use crate::linalg::FftPair;
use crate::solvers::{DenseOperator, SolverSpec, SparseSolution};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdConfig {
    /// Delay support `D` of the expansion coefficients.
    pub d: usize,
    pub l_max: usize,
    pub k_max: usize,
    pub epsilon: f64,
    pub max_rounds: usize,
    pub equalizer_iters: usize,
    pub omp_sparsity: usize,
    /// Stop once the relative Frobenius change of the banded estimate drops
    /// below this value.
    pub change_tol: f64,
}

impl DdConfig {
    pub fn new(d: usize) -> Self {
        DdConfig {
            d,
            l_max: 0,
            k_max: 3,
            epsilon: 0.2,
            max_rounds: 10,
            equalizer_iters: 15,
            omp_sparsity: 90,
            change_tol: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("reliability threshold must be positive"));
        }
        if self.d == 0 || self.max_rounds == 0 {
            return Err(Error::invalid("delay support and round count must be positive"));
        }
        Ok(())
    }
}

/// Extended pilots: symbol values on `positions` plus the core rows used as
/// measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedPilots {
    /// Values on the extended set, zero elsewhere.
    pub values: SymbolGrid,
    /// Core positions, row-major order.
    pub core: Vec<(usize, usize)>,
}

impl ExtendedPilots {
    /// Round-zero pilots: the true pilots, each its own core position.
    pub fn from_pilots(pilots: &PilotSet, l: usize, k: usize) -> Self {
        let mut values = SymbolGrid::zeros(l, k);
        pilots.place(&mut values);
        let mut core = pilots.positions.clone();
        core.sort_unstable();
        ExtendedPilots { values, core }
    }
}

/// Measurement equation `y = Phi x` with unit-norm columns and the recorded
/// column factors (`theta_j = scales_j x_j`). Column `i D + m` belongs to
/// `T[m, i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementProblem {
    pub phi: DenseOperator,
    pub y: Vec<C64>,
    pub scales: Vec<f64>,
}

/// Rows `(l,k)` of the core set, columns `(m, i)`, entries
/// `w_{m,i}[l,k] = sum_{(l',k') near (l,k)} p_{l',k'} H^{(m,i)}_{l,k;l',k'}`
/// where `H^{(m,i)}` is the band generated by a single tap `psi_i` at delay `m`.
pub fn build_dd_measurement(
    r: &SymbolGrid,
    ext: &ExtendedPilots,
    basis: &CombinedBasis,
    cfg: &McConfig,
    d: usize,
    l_max: usize,
    k_max: usize,
) -> Result<MeasurementProblem> {
    if ext.core.is_empty() {
        return Err(Error::Degenerate("empty core set".into()));
    }
    if basis.n_r() != cfg.n_r() {
        return Err(Error::mismatch("build_dd_measurement", cfg.n_r(), basis.n_r()));
    }
    let j = basis.j();
    let fft = FftPair::new(cfg.k());
    let rows = ext.core.len();
    let mut phi = DenseOperator::zeros(rows, d * j);
    for i in 0..j {
        let psi = basis.function(i);
        for m in 0..d {
            let mut band = BandedChannel::zeros(cfg.l(), cfg.k(), l_max, k_max);
            accumulate_delay(cfg, m, &fft, &mut band, |n| psi[n]);
            let col = phi.col_mut(i * d + m);
            for (row, &(l, k)) in ext.core.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for dl in -(l_max as i64)..=l_max as i64 {
                    let lp = l as i64 + dl;
                    if lp < 0 || lp >= cfg.l() as i64 {
                        continue;
                    }
                    for dk in -(k_max as i64)..=k_max as i64 {
                        let kp = (k as i64 + dk).rem_euclid(cfg.k() as i64) as usize;
                        acc += band.get(l, k, dl, dk) * ext.values.get(lp as usize, kp);
                    }
                }
                col[row] = acc;
            }
        }
    }
    let scales = phi.normalize_columns();
    if scales.iter().all(|&s| s == 0.0) {
        return Err(Error::Degenerate("all measurement columns vanish".into()));
    }
    let y = ext.core.iter().map(|&(l, k)| r.get(l, k)).collect();
    Ok(MeasurementProblem { phi, y, scales })
}

/// `h[n,m] = sum_i T[m,i] psi_i[n]` pushed through the system: banded
/// `H_{l,k;l',k'}` for the given band. `t` is indexed `i D + m`.
pub fn reconstruct_h_from_t(
    t: &[C64],
    cfg: &McConfig,
    basis: &CombinedBasis,
    d: usize,
    l_max: usize,
    k_max: usize,
) -> Result<BandedChannel> {
    let j = basis.j();
    if t.len() != d * j {
        return Err(Error::mismatch("reconstruct_h_from_t", d * j, t.len()));
    }
    let n_r = cfg.n_r();
    let mut taps = vec![C64::new(0.0, 0.0); d * n_r];
    for m in 0..d {
        for i in 0..j {
            let c = t[i * d + m];
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            for (n, p) in basis.function(i).iter().enumerate() {
                taps[m * n_r + n] += c * p;
            }
        }
    }
    Ok(banded_from_taps(cfg, d, l_max, k_max, |n, m| taps[m * n_r + n]))
}

/// Reliability of every position: pilots, or both quadrature components of
/// the soft symbol beyond `epsilon`.
pub fn reliability(soft: &SymbolGrid, pilots: &PilotSet, epsilon: f64) -> Vec<bool> {
    let pilot = pilots.mask(soft.rows(), soft.cols());
    soft.values()
        .iter()
        .zip(pilot)
        .map(|(z, p)| p || (z.re.abs() > epsilon && z.im.abs() > epsilon))
        .collect()
}

/// Largest core set whose neighborhoods (`|dl| <= l_max`, `|dk| <= k_max`
/// modulo K, clipped to the block) are entirely reliable, and the extended
/// pilots `hard` (true pilots substituted) on its neighborhoods and on the
/// pilot positions.
pub fn reliable_set(
    soft: &SymbolGrid,
    hard: &SymbolGrid,
    pilots: &PilotSet,
    epsilon: f64,
    l_max: usize,
    k_max: usize,
) -> ExtendedPilots {
    let (l, k) = (soft.rows(), soft.cols());
    let rel = reliability(soft, pilots, epsilon);
    let mut core = Vec::new();
    let mut member = vec![false; l * k];
    for li in 0..l {
        'pos: for ki in 0..k {
            for dl in -(l_max as i64)..=l_max as i64 {
                let lp = li as i64 + dl;
                if lp < 0 || lp >= l as i64 {
                    continue;
                }
                for dk in -(k_max as i64)..=k_max as i64 {
                    let kp = (ki as i64 + dk).rem_euclid(k as i64) as usize;
                    if !rel[lp as usize * k + kp] {
                        continue 'pos;
                    }
                }
            }
            core.push((li, ki));
            for dl in -(l_max as i64)..=l_max as i64 {
                let lp = li as i64 + dl;
                if lp < 0 || lp >= l as i64 {
                    continue;
                }
                for dk in -(k_max as i64)..=k_max as i64 {
                    let kp = (ki as i64 + dk).rem_euclid(k as i64) as usize;
                    member[lp as usize * k + kp] = true;
                }
            }
        }
    }
    for &(pl, pk) in &pilots.positions {
        member[pl * k + pk] = true;
    }
    let mut values = SymbolGrid::zeros(l, k);
    for (idx, &inside) in member.iter().enumerate() {
        if inside {
            values.values_mut()[idx] = hard.values()[idx];
        }
    }
    pilots.place(&mut values);
    ExtendedPilots { values, core }
}

/// One pass of the iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DdRound {
    /// `T[m, i]` indexed `i D + m`.
    pub t_hat: Vec<C64>,
    pub estimate: BandedChannel,
    pub soft: SymbolGrid,
    pub hard: SymbolGrid,
    /// Number of measurement rows used in this round.
    pub core_size: usize,
    /// Fraction of reliable positions after this round's detection.
    pub reliable_fraction: f64,
    /// The core set had become empty and the round fell back to the pilots.
    pub fallback: bool,
    pub solution: SparseSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdOutcome {
    pub rounds: Vec<DdRound>,
    /// Round after which the banded estimate stopped changing, if any.
    pub converged_after: Option<usize>,
}

impl DdOutcome {
    /// Round `r`, or the last one run if the loop stopped earlier.
    pub fn round(&self, r: usize) -> &DdRound {
        &self.rounds[r.min(self.rounds.len() - 1)]
    }

    pub fn final_round(&self) -> &DdRound {
        self.rounds.last().expect("at least one round")
    }
}

fn run_round(
    r: &SymbolGrid,
    ext: &ExtendedPilots,
    basis: &CombinedBasis,
    cfg: &McConfig,
    dd: &DdConfig,
    neighborhood: (usize, usize),
    solver: &SolverSpec,
) -> Result<(Vec<C64>, BandedChannel, SparseSolution)> {
    let (vl, vk) = neighborhood;
    let prob = build_dd_measurement(r, ext, basis, cfg, dd.d, vl, vk)?;
    let sol = solver.solve(&prob.phi, &prob.y)?;
    let t: Vec<C64> = sol.x_hat.iter().zip(&prob.scales).map(|(x, s)| x * s).collect();
    let est = reconstruct_h_from_t(&t, cfg, basis, dd.d, dd.l_max, dd.k_max)?;
    Ok((t, est, sol))
}

/// Round 0 measures the pilots alone with one-tap equalization; later rounds
/// use the reliable detected symbols as extra pilots, the full neighborhood
/// in the measurement and LSQR equalization.
pub fn decision_directed_estimate(
    r: &SymbolGrid,
    pilots: &PilotSet,
    basis: &CombinedBasis,
    cfg: &McConfig,
    dd: &DdConfig,
) -> Result<DdOutcome> {
    let solver = SolverSpec::Omp {
        sparsity: dd.omp_sparsity,
    };
    decision_directed_estimate_with(r, pilots, basis, cfg, dd, &solver)
}

/// As [`decision_directed_estimate`] with an explicit sparse solver in place
/// of OMP with `dd.omp_sparsity` atoms.
pub fn decision_directed_estimate_with(
    r: &SymbolGrid,
    pilots: &PilotSet,
    basis: &CombinedBasis,
    cfg: &McConfig,
    dd: &DdConfig,
    solver: &SolverSpec,
) -> Result<DdOutcome> {
    dd.validate()?;
    let (l, k) = (cfg.l(), cfg.k());
    if r.rows() != l || r.cols() != k {
        return Err(Error::mismatch("decision_directed_estimate", l * k, r.rows() * r.cols()));
    }
    let pilot_ext = ExtendedPilots::from_pilots(pilots, l, k);
    let mut ext = pilot_ext.clone();
    let mut rounds: Vec<DdRound> = Vec::new();
    let mut converged_after = None;
    for round in 0..dd.max_rounds {
        let fallback = round > 0 && ext.core.is_empty();
        let first = round == 0 || fallback;
        if fallback {
            ext = pilot_ext.clone();
        }
        let core_size = ext.core.len();
        let neighborhood = if first { (0, 0) } else { (dd.l_max, dd.k_max) };
        let (t_hat, estimate, solution) = run_round(r, &ext, basis, cfg, dd, neighborhood, solver)?;
        let soft = if first {
            one_tap_equalize(&estimate.diagonal(), r)
        } else {
            ici_equalize_lsqr(&estimate, r, dd.equalizer_iters)
        };
        let mut hard = SymbolGrid::zeros(l, k);
        for (h, s) in hard.values_mut().iter_mut().zip(soft.values()) {
            *h = qam_decide(*s);
        }
        pilots.place(&mut hard);
        let rel = reliability(&soft, pilots, dd.epsilon);
        let reliable_fraction = rel.iter().filter(|&&b| b).count() as f64 / rel.len() as f64;
        let change = rounds.last().map(|prev| relative_change(&prev.estimate, &estimate));
        ext = reliable_set(&soft, &hard, pilots, dd.epsilon, dd.l_max, dd.k_max);
        rounds.push(DdRound {
            t_hat,
            estimate,
            soft,
            hard,
            core_size,
            reliable_fraction,
            fallback,
            solution,
        });
        if let Some(c) = change {
            if c < dd.change_tol {
                converged_after = Some(round);
                break;
            }
        }
    }
    Ok(DdOutcome { rounds, converged_after })
}

/// `|A - B|_F / |B|_F` over the band (`|A|_F` when `B` vanishes).
pub fn relative_change(prev: &BandedChannel, next: &BandedChannel) -> f64 {
    let diff: f64 = prev
        .values()
        .iter()
        .zip(next.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let base = prev.energy();
    if base > 0.0 {
        (diff / base).sqrt()
    } else {
        diff.sqrt()
    }
}
