//! Pilot-count bound and coherence diagnostics for a configuration.

use ddchan_core::bases::{dft_basis, optimized_basis, OptimizeParams};
use ddchan_core::estimators::SubsampledGrid;
use ddchan_core::frame::McConfig;
use ddchan_core::linalg::coherence;
use ddchan_core::solvers::{pilot_count_bound, sparsity_estimate};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Constants of the pilot-count bound. The absolute constant is unknown, so
/// only ratios between bases are meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub gamma: f64,
    pub eta: f64,
    pub c: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            gamma: 1.0,
            eta: (-1.0f64).exp(),
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisDiag {
    pub basis: &'static str,
    pub coherence: f64,
    pub pilot_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub d: usize,
    pub j: usize,
    pub pilots: usize,
    pub sparsity: usize,
    pub bases: Vec<BasisDiag>,
}

/// Coherence `sqrt(J) max |B_m|` of the DFT and the optimized basis at the
/// first sweep point, and the resulting pilot-count bounds.
pub fn diagnose(config: &ExperimentConfig, consts: BoundConstants) -> Result<Diagnostics> {
    let sys = &config.system;
    let cfg = McConfig::cp_ofdm(sys.k, sys.n, sys.l)?;
    let grid = SubsampledGrid::new(&cfg, sys.k / sys.delta_k.max(1), sys.l / sys.delta_l.max(1))?;
    let first = config.sweep.values[0];
    let q = config.pilot_count(first);
    let sparsity = if config.solver.sparsity > 0 {
        config.solver.sparsity
    } else {
        sparsity_estimate(q.max(1), grid.len().max(2))?
    };
    let params = OptimizeParams {
        rho0: config.basis.rho0,
        rho_min: config.basis.rho_min,
        max_iter: config.basis.max_iter,
        inner_iter: config.basis.inner_iter,
    };
    let nu_max = config.max_doppler(first) / sys.k as f64;
    let candidates = [
        ("dft", dft_basis(grid.j, grid.d)?),
        ("optimized", optimized_basis(&cfg, nu_max, grid.d, grid.j, &params)?),
    ];
    let bases = candidates
        .iter()
        .map(|(name, b)| {
            let mu = b.distinct_matrices().iter().map(coherence).fold(0.0, f64::max);
            BasisDiag {
                basis: name,
                coherence: mu,
                pilot_bound: pilot_count_bound(sparsity, grid.j, grid.d, mu, consts.gamma, consts.eta, consts.c),
            }
        })
        .collect();
    Ok(Diagnostics {
        d: grid.d,
        j: grid.j,
        pilots: q,
        sparsity,
        bases,
    })
}
