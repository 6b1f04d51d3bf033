//! Discrete prolate spheroidal (Slepian) sequences from the commuting
//! symmetric tridiagonal matrix.

use crate::error::{Error, Result};

struct Tridiagonal {
    diag: Vec<f64>,
    // off[i] couples rows i and i+1
    off: Vec<f64>,
}

impl Tridiagonal {
    fn slepian(n: usize, w: f64) -> Self {
        let c = (2.0 * std::f64::consts::PI * w).cos();
        let diag = (0..n)
            .map(|i| {
                let t = (n as f64 - 1.0 - 2.0 * i as f64) / 2.0;
                t * t * c
            })
            .collect();
        let off = (1..n).map(|i| (i * (n - i)) as f64 / 2.0).collect();
        Tridiagonal { diag, off }
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64, tiny: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let qp = if q == 0.0 { tiny } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / qp;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Eigenvalue with ascending index `idx`, by bisection.
    fn eigenvalue(&self, idx: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let tiny = f64::EPSILON * scale * 1e-3;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid, tiny) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift I) x = b` by Gaussian elimination with partial
    /// pivoting; exactly zero pivots are replaced by a tiny value.
    fn shifted_solve(&self, shift: f64, b: &mut [f64], tiny: f64) {
        let n = self.len();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                du[i] = temp;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - fact * b[i + 1];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            if d[n - 2] == 0.0 {
                d[n - 2] = tiny;
            }
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// The first `count` Slepian sequences of length `n` with half-bandwidth `w`
/// (cycles/sample), unit norm, ordered by decreasing concentration. Even
/// orders have positive sum; odd orders have a positive first lobe.
pub fn dpss(n: usize, w: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    if !(w > 0.0 && w < 0.5) {
        return Err(Error::invalid(format!("DPSS bandwidth {w} outside (0, 1/2)")));
    }
    if n == 0 || count > n {
        return Err(Error::invalid(format!("cannot take {count} sequences of length {n}")));
    }
    let t = Tridiagonal::slepian(n, w);
    let (lo, hi) = t.gershgorin();
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let tiny = f64::EPSILON * scale;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    for k in 0..count {
        let lambda = t.eigenvalue(n - 1 - k);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7919 + k * 104729) % 97) as f64).collect();
        for _ in 0..4 {
            t.shifted_solve(lambda, &mut v, tiny);
            for prev in &out {
                let c: f64 = prev.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(prev).for_each(|(x, p)| *x -= c * p);
            }
            normalize(&mut v);
        }
        let sign = if k % 2 == 0 {
            v.iter().sum::<f64>()
        } else {
            v.iter().take(n / 2).sum::<f64>()
        };
        if sign < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(v);
    }
    Ok(out)
}

/// Fraction of the energy of `v` inside the band `[-w, w]`:
/// `sum_{n,n'} v[n] v[n'] sin(2pi w (n-n')) / (pi (n-n'))`. Quadratic cost.
pub fn concentration(v: &[f64], w: f64) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            let d = a as f64 - b as f64;
            let k = if a == b {
                2.0 * w
            } else {
                (2.0 * std::f64::consts::PI * w * d).sin() / (std::f64::consts::PI * d)
            };
            s += v[a] * v[b] * k;
        }
    }
    s
}
