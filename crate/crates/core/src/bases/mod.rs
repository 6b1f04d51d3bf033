//! Sparsifying dictionaries: per-delay unitary Doppler bases (DFT, optimized,
//! statistically optimized) and the combined DFT-DPSS time basis.

mod combined;
mod cvec;
mod dft;
mod dpss;
mod io;
mod optimize;
mod stat;

pub use combined::{combined_basis, dft_function, vartheta, vartheta_dft, vartheta_dpss, CombinedBasis};
pub use cvec::{c_vector_sets, c_vectors, c_vectors_with, group_c_sets};
pub use dft::{dft_basis, dft_matrix, BasisFamily, DopplerGrid, Provenance};
pub use dpss::{concentration, dpss};
pub use io::Dictionary;
pub use optimize::{
    hermitian_l1_objective, hermitian_l1_step, l1_cost, optimize_bases, optimize_matrix, OptimizeParams,
};
pub use stat::{stat_weights, weight_c_vectors, StatPrior};

use crate::error::Result;
use crate::frame::McConfig;

/// Deterministically optimized family for delays `m < d` and `J` Doppler
/// functions, evaluated on the half-spaced Doppler grid up to `nu_max`.
pub fn optimized_basis(
    cfg: &McConfig,
    nu_max: f64,
    d: usize,
    j: usize,
    params: &OptimizeParams,
) -> Result<BasisFamily> {
    let grid = DopplerGrid::new(cfg.n_r(), nu_max)?;
    let sets = c_vector_sets(cfg, &grid, d, j)?;
    let (distinct, assignment) = group_c_sets(sets);
    optimize_bases(&distinct, assignment, params, Provenance::DetOptimized)
}

/// Statistically optimized family: the c-vectors are weighted by the prior
/// before optimization.
pub fn stat_optimized_basis(
    cfg: &McConfig,
    nu_max: f64,
    d: usize,
    j: usize,
    prior: &StatPrior,
    model: crate::channel::FilterModel,
    params: &OptimizeParams,
) -> Result<BasisFamily> {
    let grid = DopplerGrid::new(cfg.n_r(), nu_max)?;
    let sets = c_vector_sets(cfg, &grid, d, j)?;
    let weights = stat_weights(prior, model, d, &grid)?;
    let weighted = weight_c_vectors(&sets, &weights)?;
    let (distinct, assignment) = group_c_sets(weighted);
    optimize_bases(&distinct, assignment, params, Provenance::StatOptimized)
}
