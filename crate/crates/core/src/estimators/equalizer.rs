//! Least-squares ISI/ICI equalization with a banded channel.

use crate::channel::BandedChannel;
use crate::frame::SymbolGrid;
use crate::solvers::{lsqr, LinearOperator};
use crate::C64;

/// Band of symbols `l0..l1` as a linear map on those symbols only.
struct BandOperator<'a> {
    h: &'a BandedChannel,
    l0: usize,
    l1: usize,
}

impl BandOperator<'_> {
    fn embed(&self, x: &[C64]) -> SymbolGrid {
        let k = self.h.cols();
        let mut g = SymbolGrid::zeros(self.h.rows(), k);
        g.values_mut()[self.l0 * k..self.l1 * k].copy_from_slice(x);
        g
    }
}

impl LinearOperator for BandOperator<'_> {
    fn rows(&self) -> usize {
        (self.l1 - self.l0) * self.h.cols()
    }

    fn cols(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let k = self.h.cols();
        let out = self.h.apply(&self.embed(x));
        y.copy_from_slice(&out.values()[self.l0 * k..self.l1 * k]);
    }

    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]) {
        let k = self.h.cols();
        let out = self.h.apply_adjoint(&self.embed(y));
        x.copy_from_slice(&out.values()[self.l0 * k..self.l1 * k]);
    }
}

/// Soft symbols from `iters` LSQR iterations on `r = H a`. Without ISI
/// (`l_max = 0`) every multicarrier symbol is solved separately.
pub fn ici_equalize_lsqr(h: &BandedChannel, r: &SymbolGrid, iters: usize) -> SymbolGrid {
    let (l, k) = (h.rows(), h.cols());
    let mut out = SymbolGrid::zeros(l, k);
    let blocks: Vec<(usize, usize)> = if h.l_max() == 0 {
        (0..l).map(|li| (li, li + 1)).collect()
    } else {
        vec![(0, l)]
    };
    for (l0, l1) in blocks {
        let op = BandOperator { h, l0, l1 };
        let b = &r.values()[l0 * k..l1 * k];
        let sol = lsqr(&op, b, iters, 0.0);
        out.values_mut()[l0 * k..l1 * k].copy_from_slice(&sol.x);
    }
    out
}

/// `a_{l,k} = r_{l,k} / H_{l,k;l,k}` (zero where the coefficient vanishes).
pub fn one_tap_equalize(h_diag: &SymbolGrid, r: &SymbolGrid) -> SymbolGrid {
    let vals = r
        .values()
        .iter()
        .zip(h_diag.values())
        .map(|(rv, hv)| if hv.norm_sqr() > 0.0 { rv / hv } else { C64::new(0.0, 0.0) })
        .collect();
    SymbolGrid::from_vec(r.rows(), r.cols(), vals).expect("same shape")
}
