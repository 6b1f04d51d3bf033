//! Pilot grids, pilot placement and per-pilot least-squares estimates.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::comms::qam_random;
use crate::error::{Error, Result};
use crate::frame::{McConfig, SymbolGrid};
use crate::C64;

/// Subsampled grid `(lambda dL, kappa dK)`, `lambda < J`, `kappa < D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsampledGrid {
    pub delta_k: usize,
    pub delta_l: usize,
    pub d: usize,
    pub j: usize,
}

impl SubsampledGrid {
    pub fn new(cfg: &McConfig, d: usize, j: usize) -> Result<Self> {
        if d == 0 || j == 0 || cfg.k() % d != 0 || cfg.l() % j != 0 {
            return Err(Error::invalid(format!(
                "D = {d} and J = {j} must divide K = {} and L = {}",
                cfg.k(),
                cfg.l()
            )));
        }
        if j % 2 != 0 && j != 1 {
            return Err(Error::invalid(format!("J = {j} must be even")));
        }
        Ok(SubsampledGrid {
            delta_k: cfg.k() / d,
            delta_l: cfg.l() / j,
            d,
            j,
        })
    }

    /// The whole `L x K` grid (`D = K`, `J = L`).
    pub fn full(cfg: &McConfig) -> Result<Self> {
        Self::new(cfg, cfg.k(), cfg.l())
    }

    pub fn len(&self) -> usize {
        self.d * self.j
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid position of stacking index `kappa J + lambda`.
    pub fn position(&self, index: usize) -> (usize, usize) {
        let (kappa, lambda) = (index / self.j, index % self.j);
        (lambda * self.delta_l, kappa * self.delta_k)
    }

    /// Stacking index of a position on the grid.
    pub fn index_of(&self, l: usize, k: usize) -> Option<usize> {
        if l % self.delta_l != 0 || k % self.delta_k != 0 {
            return None;
        }
        let (lambda, kappa) = (l / self.delta_l, k / self.delta_k);
        (lambda < self.j && kappa < self.d).then_some(kappa * self.j + lambda)
    }
}

/// Pilot positions `(l, k)` and values, ordered by stacking index.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotSet {
    pub positions: Vec<(usize, usize)>,
    pub values: Vec<C64>,
    pub seed: u64,
}

impl PilotSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `l x k` membership mask.
    pub fn mask(&self, l: usize, k: usize) -> Vec<bool> {
        let mut m = vec![false; l * k];
        for &(pl, pk) in &self.positions {
            m[pl * k + pk] = true;
        }
        m
    }

    /// Writes the pilot values into `grid`.
    pub fn place(&self, grid: &mut SymbolGrid) {
        for (&(l, k), &v) in self.positions.iter().zip(&self.values) {
            grid.set(l, k, v);
        }
    }
}

/// `count` distinct positions of `grid` drawn uniformly, with random 4-QAM
/// values, from a generator seeded by `seed`.
pub fn draw_pilots(grid: &SubsampledGrid, count: usize, seed: u64) -> Result<PilotSet> {
    let total = grid.len();
    if count > total {
        return Err(Error::invalid(format!("{count} pilots exceed the {total} grid positions")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, total, count).into_vec();
    idx.sort_unstable();
    let positions = idx.iter().map(|&i| grid.position(i)).collect();
    let values = (0..count).map(|_| qam_random(&mut rng)).collect();
    Ok(PilotSet { positions, values, seed })
}

/// `y = r_{l,k} / p_{l,k}` at the pilot positions, in pilot order.
pub fn ls_pilot_estimates(r: &SymbolGrid, pilots: &PilotSet) -> Result<Vec<C64>> {
    pilots
        .positions
        .iter()
        .zip(&pilots.values)
        .map(|(&(l, k), &p)| {
            if p.norm_sqr() == 0.0 {
                Err(Error::invalid(format!("zero pilot value at ({l}, {k})")))
            } else {
                Ok(r.get(l, k) / p)
            }
        })
        .collect()
}
