//! Iterative l1 optimization of unitary per-delay bases.

use super::dft::{dft_matrix, BasisFamily, Provenance};
use crate::error::{Error, Result};
use crate::linalg::{expm_j_hermitian, norm1, CMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeParams {
    pub rho0: f64,
    pub rho_min: f64,
    pub max_iter: usize,
    /// Projected-subgradient iterations of the inner step.
    pub inner_iter: usize,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        OptimizeParams {
            rho0: 0.05,
            rho_min: 1e-4,
            max_iter: 100,
            inner_iter: 200,
        }
    }
}

/// `sum_nu |B c_nu|_1`.
pub fn l1_cost(b: &CMatrix, cs: &[Vec<C64>]) -> f64 {
    cs.iter()
        .map(|c| {
            let v = b * nalgebra::DVector::from_column_slice(c);
            norm1(v.as_slice())
        })
        .sum()
}

/// Real parameters of a Hermitian J x J matrix: the J diagonal entries, then
/// (re, im) of each upper entry in row-major order.
fn param_count(j: usize) -> usize {
    j * j
}

fn to_matrix(p: &[f64], j: usize) -> CMatrix {
    let mut a = CMatrix::zeros(j, j);
    for k in 0..j {
        a[(k, k)] = C64::new(p[k], 0.0);
    }
    let mut t = j;
    for k in 0..j {
        for q in k + 1..j {
            let v = C64::new(p[t], p[t + 1]);
            a[(k, q)] = v;
            a[(q, k)] = v.conj();
            t += 2;
        }
    }
    a
}

fn linearized_objective(vs: &[Vec<C64>], a: &CMatrix) -> f64 {
    let j = a.nrows();
    let mut total = 0.0;
    for v in vs {
        for k in 0..j {
            let mut av = C64::new(0.0, 0.0);
            for q in 0..j {
                av += a[(k, q)] * v[q];
            }
            total += (v[k] + C64::new(0.0, 1.0) * av).norm();
        }
    }
    total
}

fn subgradient(vs: &[Vec<C64>], a: &CMatrix, g: &mut [f64]) {
    let j = a.nrows();
    let jj = C64::new(0.0, 1.0);
    // M_kq = sum_nu j conj(s_k) v_q with s = sign(v + jAv)
    let mut mm = CMatrix::zeros(j, j);
    for v in vs {
        for k in 0..j {
            let mut av = C64::new(0.0, 0.0);
            for q in 0..j {
                av += a[(k, q)] * v[q];
            }
            let w = v[k] + jj * av;
            let n = w.norm();
            if n == 0.0 {
                continue;
            }
            let s = (w / n).conj();
            for q in 0..j {
                mm[(k, q)] += jj * s * v[q];
            }
        }
    }
    for k in 0..j {
        g[k] = mm[(k, k)].re;
    }
    let mut t = j;
    for k in 0..j {
        for q in k + 1..j {
            g[t] = (mm[(k, q)] + mm[(q, k)]).re;
            g[t + 1] = mm[(q, k)].im - mm[(k, q)].im;
            t += 2;
        }
    }
}

/// Approximate minimizer of `sum_nu |v_nu + j A v_nu|_1` over Hermitian `A`
/// whose entries have real and imaginary parts bounded by `rho`, by projected
/// subgradient descent with steps `rho / sqrt(t)` along the max-normalized
/// subgradient. The best iterate is returned, and `A = 0` is kept whenever
/// nothing beats it.
pub fn hermitian_l1_step(vs: &[Vec<C64>], rho: f64, iters: usize) -> CMatrix {
    let j = vs.first().map(|v| v.len()).unwrap_or(0);
    if j == 0 || rho <= 0.0 {
        return CMatrix::zeros(j, j);
    }
    let np = param_count(j);
    let mut p = vec![0.0; np];
    let mut best = p.clone();
    let mut best_f = linearized_objective(vs, &CMatrix::zeros(j, j));
    let mut g = vec![0.0; np];
    for t in 1..=iters {
        let a = to_matrix(&p, j);
        subgradient(vs, &a, &mut g);
        let gmax = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if gmax == 0.0 {
            break;
        }
        let step = rho / (t as f64).sqrt() / gmax;
        for (pi, gi) in p.iter_mut().zip(&g) {
            *pi = (*pi - step * gi).clamp(-rho, rho);
        }
        let f = linearized_objective(vs, &to_matrix(&p, j));
        if f < best_f {
            best_f = f;
            best.copy_from_slice(&p);
        }
    }
    to_matrix(&best, j)
}

/// Value of the linearized objective for a given `A` (exposed for tests).
pub fn hermitian_l1_objective(vs: &[Vec<C64>], a: &CMatrix) -> f64 {
    linearized_objective(vs, a)
}

/// Optimizes one unitary matrix for the vectors `cs`, starting from the DFT
/// matrix. Returns the matrix and its cost after every iteration (the first
/// entry is the DFT cost).
pub fn optimize_matrix(cs: &[Vec<C64>], params: &OptimizeParams) -> Result<(CMatrix, Vec<f64>)> {
    if !(params.rho0 > params.rho_min && params.rho_min > 0.0) {
        return Err(Error::invalid("basis optimization needs rho0 > rho_min > 0"));
    }
    let j = cs.first().map(|c| c.len()).ok_or_else(|| Error::invalid("empty c-vector set"))?;
    let mut b = dft_matrix(j);
    let mut cost = l1_cost(&b, cs);
    let mut trace = vec![cost];
    let mut rho = params.rho0;
    for _ in 0..params.max_iter {
        if rho < params.rho_min {
            break;
        }
        let vs: Vec<Vec<C64>> = cs
            .iter()
            .map(|c| (&b * nalgebra::DVector::from_column_slice(c)).as_slice().to_vec())
            .collect();
        let a = hermitian_l1_step(&vs, rho, params.inner_iter);
        let candidate = expm_j_hermitian(&a) * &b;
        let c_new = l1_cost(&candidate, cs);
        if c_new < cost * (1.0 - 1e-12) {
            b = candidate;
            cost = c_new;
        } else {
            rho /= 2.0;
        }
        trace.push(cost);
    }
    Ok((b, trace))
}

/// Optimizes one matrix per distinct c-vector set; `assignment` maps each
/// delay to its set.
pub fn optimize_bases(
    distinct_sets: &[Vec<Vec<C64>>],
    assignment: Vec<usize>,
    params: &OptimizeParams,
    provenance: Provenance,
) -> Result<BasisFamily> {
    let mut matrices = Vec::with_capacity(distinct_sets.len());
    let mut traces = Vec::with_capacity(distinct_sets.len());
    for cs in distinct_sets {
        let (b, trace) = optimize_matrix(cs, params)?;
        matrices.push(b);
        traces.push(trace);
    }
    BasisFamily::new(provenance, matrices, assignment, traces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_radius_gives_zero_step() {
        let vs = vec![vec![C64::new(1.0, 0.0), C64::new(0.3, 0.2)]];
        let a = hermitian_l1_step(&vs, 0.0, 50);
        assert!(a.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn step_never_worse_than_zero() {
        let vs = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.4, 0.1), C64::new(-0.2, 0.5)],
        ];
        let a = hermitian_l1_step(&vs, 0.1, 200);
        let f0 = hermitian_l1_objective(&vs, &CMatrix::zeros(2, 2));
        assert!(hermitian_l1_objective(&vs, &a) <= f0);
        for i in 0..2 {
            for k in 0..2 {
                assert!((a[(i, k)] - a[(k, i)].conj()).norm() < 1e-15);
                assert!(a[(i, k)].re.abs() <= 0.1 + 1e-15 && a[(i, k)].im.abs() <= 0.1 + 1e-15);
            }
        }
    }

    #[test]
    fn unit_vector_stays_put() {
        // |1 + j a11| + |j a21| >= 1, minimum at A = 0
        let vs = vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]];
        let a = hermitian_l1_step(&vs, 0.2, 200);
        assert!((hermitian_l1_objective(&vs, &a) - 1.0).abs() < 1e-12);
    }
}
