//! Linear maps with adjoints: dense matrices, partial DFTs and column views.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dotc, norm2, FftPair};
use crate::C64;

pub trait LinearOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// `x = A^H y`
    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]);

    fn column(&self, j: usize) -> Vec<C64> {
        let mut e = vec![C64::new(0.0, 0.0); self.cols()];
        e[j] = C64::new(1.0, 0.0);
        let mut out = vec![C64::new(0.0, 0.0); self.rows()];
        self.apply(&e, &mut out);
        out
    }

    fn column_norms(&self) -> Vec<f64> {
        (0..self.cols()).map(|j| norm2(&self.column(j))).collect()
    }
}

/// Dense matrix stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseOperator {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        DenseOperator { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<C64>>) -> Result<Self> {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            if c.len() != rows {
                return Err(Error::mismatch("DenseOperator::from_columns", rows, c.len()));
            }
            data.extend(c);
        }
        Ok(DenseOperator { rows, cols, data })
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.rows + i]
    }

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Scales every nonzero column to unit norm and returns the applied
    /// factors `d_j` (so the original matrix is `A' diag(1/d)`). Zero columns
    /// keep factor 0.
    pub fn normalize_columns(&mut self) -> Vec<f64> {
        let mut scales = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let nrm = norm2(self.col(j));
            if nrm > 0.0 {
                let s = 1.0 / nrm;
                self.col_mut(j).iter_mut().for_each(|v| *v *= s);
                scales.push(s);
            } else {
                scales.push(0.0);
            }
        }
        scales
    }
}

impl LinearOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (j, xj) in x.iter().enumerate() {
            if xj.re == 0.0 && xj.im == 0.0 {
                continue;
            }
            for (yi, a) in y.iter_mut().zip(self.col(j)) {
                *yi += a * xj;
            }
        }
    }

    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]) {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = dotc(self.col(j), y);
        }
    }

    fn column(&self, j: usize) -> Vec<C64> {
        self.col(j).to_vec()
    }

    fn column_norms(&self) -> Vec<f64> {
        (0..self.cols).map(|j| norm2(self.col(j))).collect()
    }
}

/// Selected rows of the unitary n-point DFT, rescaled to unit-norm columns:
/// `A[r, j] = e^{-j2pi rows[r] j / n} / sqrt(|rows|)`.
pub struct PartialDft {
    n: usize,
    rows: Vec<usize>,
    fft: FftPair,
}

impl PartialDft {
    pub fn new(n: usize, rows: Vec<usize>) -> Result<Self> {
        if rows.iter().any(|&r| r >= n) {
            return Err(Error::invalid("partial DFT row index out of range"));
        }
        Ok(PartialDft {
            n,
            rows,
            fft: FftPair::new(n),
        })
    }

    pub fn to_dense(&self) -> DenseOperator {
        let s = 1.0 / (self.rows.len() as f64).sqrt();
        DenseOperator::from_fn(self.rows.len(), self.n, |r, j| {
            crate::linalg::cis2pi(-((self.rows[r] * j) as f64) / self.n as f64) * s
        })
    }
}

impl LinearOperator for PartialDft {
    fn rows(&self) -> usize {
        self.rows.len()
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut buf = x.to_vec();
        self.fft.forward(&mut buf);
        let s = 1.0 / (self.rows.len() as f64).sqrt();
        for (yi, &r) in y.iter_mut().zip(&self.rows) {
            *yi = buf[r] * s;
        }
    }

    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]) {
        let mut buf = vec![C64::new(0.0, 0.0); self.n];
        for (yi, &r) in y.iter().zip(&self.rows) {
            buf[r] += yi;
        }
        self.fft.inverse(&mut buf);
        let s = 1.0 / (self.rows.len() as f64).sqrt();
        for (xi, b) in x.iter_mut().zip(&buf) {
            *xi = b * s;
        }
    }

    fn column_norms(&self) -> Vec<f64> {
        vec![1.0; self.n]
    }
}

/// The columns `cols` of another operator.
pub struct ColumnSubset<'a, A: LinearOperator + ?Sized> {
    op: &'a A,
    cols: &'a [usize],
}

impl<'a, A: LinearOperator + ?Sized> ColumnSubset<'a, A> {
    pub fn new(op: &'a A, cols: &'a [usize]) -> Self {
        ColumnSubset { op, cols }
    }
}

impl<A: LinearOperator + ?Sized> LinearOperator for ColumnSubset<'_, A> {
    fn rows(&self) -> usize {
        self.op.rows()
    }

    fn cols(&self) -> usize {
        self.cols.len()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut full = vec![C64::new(0.0, 0.0); self.op.cols()];
        for (v, &c) in x.iter().zip(self.cols) {
            full[c] += v;
        }
        self.op.apply(&full, y);
    }

    fn apply_adjoint(&self, y: &[C64], x: &mut [C64]) {
        let mut full = vec![C64::new(0.0, 0.0); self.op.cols()];
        self.op.apply_adjoint(y, &mut full);
        for (v, &c) in x.iter_mut().zip(self.cols) {
            *v = full[c];
        }
    }

    fn column(&self, j: usize) -> Vec<C64> {
        self.op.column(self.cols[j])
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Relative mismatch `|<Ax, y> - <x, A^H y>| / (|Ax| |y|)` on random probes.
pub fn adjoint_mismatch<A: LinearOperator + ?Sized, R: Rng + ?Sized>(
    op: &A,
    rng: &mut R,
    probes: usize,
) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let x = random_vector(rng, op.cols());
        let y = random_vector(rng, op.rows());
        let mut ax = vec![C64::new(0.0, 0.0); op.rows()];
        op.apply(&x, &mut ax);
        let mut ahy = vec![C64::new(0.0, 0.0); op.cols()];
        op.apply_adjoint(&y, &mut ahy);
        let lhs = dotc(&y, &ax);
        let rhs = dotc(&ahy, &x);
        let denom = (norm2(&ax) * norm2(&y)).max(norm2(&x) * norm2(&ahy)).max(1e-300);
        worst = worst.max((lhs - rhs).norm() / denom);
    }
    worst
}

/// Largest singular value squared, by power iteration on `A^H A`.
pub fn spectral_norm_sqr<A: LinearOperator + ?Sized>(op: &A, iters: usize) -> f64 {
    let n = op.cols();
    if n == 0 || op.rows() == 0 {
        return 0.0;
    }
    let mut x: Vec<C64> = (0..n)
        .map(|j| C64::new(1.0 + (j % 7) as f64 * 0.1, (j % 3) as f64 * 0.05))
        .collect();
    let mut ax = vec![C64::new(0.0, 0.0); op.rows()];
    let mut lam = 0.0;
    for _ in 0..iters {
        let nrm = norm2(&x);
        if nrm == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= nrm);
        op.apply(&x, &mut ax);
        op.apply_adjoint(&ax, &mut x);
        lam = norm2(&x);
    }
    lam
}
