use ddchan_core::linalg::norm2;
use ddchan_core::solvers::{
    adjoint_mismatch, cosamp, fista_lasso, lsqr, omp, pilot_count_bound, sparsity_estimate, ColumnSubset,
    DenseOperator, LinearOperator, PartialDft, SolverSpec,
};
use ddchan_core::C64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

fn apply<A: LinearOperator + ?Sized>(a: &A, x: &[C64]) -> Vec<C64> {
    let mut y = vec![zero(); a.rows()];
    a.apply(x, &mut y);
    y
}

/// 64 random rows of the 256-point DFT and a 5-sparse unit-magnitude vector
/// whose nonzeros are at least 8 apart.
fn partial_dft_instance(rng: &mut ChaCha8Rng, q: usize, m: usize, s: usize) -> (PartialDft, Vec<C64>, Vec<usize>) {
    let mut rows: Vec<usize> = sample(rng, m, q).into_vec();
    rows.sort_unstable();
    let op = PartialDft::new(m, rows).unwrap();
    let support = loop {
        let mut cand: Vec<usize> = sample(rng, m, s).into_vec();
        cand.sort_unstable();
        if cand.windows(2).all(|w| w[1] - w[0] >= 8) {
            break cand;
        }
    };
    let mut x = vec![zero(); m];
    for &j in &support {
        x[j] = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    }
    (op, x, support)
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting on a square system.
fn gauss_solve(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Vec<C64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[row][c] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    x
}

#[test]
fn omp_trivial_cases() {
    let id = DenseOperator::from_fn(6, 6, |i, j| if i == j { C64::new(1.0, 0.0) } else { zero() });
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let y = gaussian(&mut rng, 6);
    let sol = omp(&id, &y, 6).unwrap();
    assert!(dist(&sol.x_hat, &y) < 1e-12);
    let sol = omp(&id, &[zero(); 6], 3).unwrap();
    assert!(sol.x_hat.iter().all(|v| v.norm() == 0.0));
    assert_eq!(sol.residual_norm, 0.0);
}

#[test]
fn omp_recovers_partial_dft_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (op, x, support) = partial_dft_instance(&mut rng, 64, 256, 5);
    let y = apply(&op, &x);
    let sol = omp(&op, &y, 5).unwrap();
    assert_eq!(sol.support, support);
    assert!(dist(&sol.x_hat, &x) < 1e-9);
    assert!(sol.residual_history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn cosamp_recovers_partial_dft_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (op, x, support) = partial_dft_instance(&mut rng, 64, 256, 5);
    let y = apply(&op, &x);
    let sol = cosamp(&op, &y, 5, 15, 50).unwrap();
    assert_eq!(sol.support, support);
    assert!(dist(&sol.x_hat, &x) < 1e-6);
    let sol = cosamp(&op, &y, 0, 15, 50).unwrap();
    assert!(sol.x_hat.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn cosamp_noisy_error_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 100;
    let mut pass = 0;
    for _ in 0..trials {
        let (op, x, _) = partial_dft_instance(&mut rng, 64, 256, 5);
        let clean = apply(&op, &x);
        let mut z = gaussian(&mut rng, 64);
        let scale = 0.01 * norm2(&clean) / norm2(&z);
        z.iter_mut().for_each(|v| *v *= scale);
        let y: Vec<C64> = clean.iter().zip(&z).map(|(a, b)| a + b).collect();
        let sol = cosamp(&op, &y, 5, 15, 50).unwrap();
        if dist(&sol.x_hat, &x) <= 10.0 * norm2(&z) {
            pass += 1;
        }
        assert!(sol.support.len() <= 5);
    }
    assert!(pass >= 95, "{pass}/{trials}");
}

#[test]
fn lasso_weight_sweep_recovers_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (op, x, support) = partial_dft_instance(&mut rng, 64, 256, 5);
    let y = apply(&op, &x);
    let mut best = (f64::INFINITY, 0.0, Vec::new());
    for e in 0..12 {
        let lambda = 10f64.powf(-4.0 + 0.3 * e as f64);
        let sol = fista_lasso(&op, &y, lambda, 3000, 1e-12).unwrap();
        assert!(sol.residual_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        let err = dist(&sol.x_hat, &x);
        if err < best.0 {
            best = (err, lambda, sol.x_hat);
        }
    }
    let found: Vec<usize> = (0..256).filter(|&j| best.2[j].norm() > 0.1).collect();
    assert_eq!(found, support, "best lambda {}", best.1);
}

#[test]
fn lasso_trivial_cases() {
    let id = DenseOperator::from_fn(2, 2, |i, j| if i == j { C64::new(1.0, 0.0) } else { zero() });
    let sol = fista_lasso(&id, &[C64::new(2.0, 0.0), C64::new(0.5, 0.0)], 1.0, 500, 1e-14).unwrap();
    assert!((sol.x_hat[0] - C64::new(1.0, 0.0)).norm() < 1e-8);
    assert!(sol.x_hat[1].norm() < 1e-12);
    assert_eq!(sol.support, vec![0]);
    let sol = fista_lasso(&id, &[zero(); 2], 0.3, 100, 1e-14).unwrap();
    assert!(sol.x_hat.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn lsqr_matches_direct_solves() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // 3 x 3 well conditioned
    let vals = gaussian(&mut rng, 9);
    let a = DenseOperator::from_fn(3, 3, |i, j| vals[i * 3 + j] + if i == j { C64::new(4.0, 0.0) } else { zero() });
    let b = gaussian(&mut rng, 3);
    let rows: Vec<Vec<C64>> = (0..3).map(|i| (0..3).map(|j| a.get(i, j)).collect()).collect();
    let direct = gauss_solve(rows, b.clone());
    let out = lsqr(&a, &b, 50, 1e-14);
    assert!(dist(&out.x, &direct) < 1e-8);

    // overdetermined systems against the normal equations
    for _ in 0..50 {
        let vals = gaussian(&mut rng, 40 * 20);
        let a = DenseOperator::from_fn(40, 20, |i, j| vals[i * 20 + j]);
        let b = gaussian(&mut rng, 40);
        let gram: Vec<Vec<C64>> = (0..20)
            .map(|i| (0..20).map(|j| (0..40).map(|r| a.get(r, i).conj() * a.get(r, j)).sum()).collect())
            .collect();
        let rhs: Vec<C64> = (0..20).map(|i| (0..40).map(|r| a.get(r, i).conj() * b[r]).sum()).collect();
        let direct = gauss_solve(gram, rhs);
        let out = lsqr(&a, &b, 200, 1e-14);
        assert!(dist(&out.x, &direct) <= 1e-8 * norm2(&direct).max(1.0));
    }
}

#[test]
fn lsqr_rank_one_gives_minimum_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let u = gaussian(&mut rng, 5);
    let v = gaussian(&mut rng, 4);
    let a = DenseOperator::from_fn(5, 4, |i, j| u[i] * v[j].conj());
    let alpha = C64::new(0.7, -1.3);
    let b: Vec<C64> = u.iter().map(|x| x * alpha).collect();
    let out = lsqr(&a, &b, 20, 1e-14);
    // pseudoinverse: x = v (u^H b) / (|u|^2 |v|^2)
    let uh_b: C64 = u.iter().zip(&b).map(|(p, q)| p.conj() * q).sum();
    let scale = uh_b / (norm2(&u).powi(2) * norm2(&v).powi(2));
    let pinv: Vec<C64> = v.iter().map(|x| x * scale).collect();
    assert!(dist(&out.x, &pinv) < 1e-8);
    // orthogonal to the null space {w : v^H w = 0}
    let w = gaussian(&mut rng, 4);
    let vh_w: C64 = v.iter().zip(&w).map(|(p, q)| p.conj() * q).sum();
    let null: Vec<C64> = w.iter().zip(&v).map(|(wi, vi)| wi - vi * vh_w / norm2(&v).powi(2)).collect();
    let ip: C64 = null.iter().zip(&out.x).map(|(p, q)| p.conj() * q).sum();
    assert!(ip.norm() < 1e-8);
}

#[test]
fn adjoint_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vals = gaussian(&mut rng, 30 * 17);
    let dense = DenseOperator::from_fn(30, 17, |i, j| vals[i * 17 + j]);
    assert!(adjoint_mismatch(&dense, &mut rng, 10) < 1e-10);
    let pdft = PartialDft::new(64, vec![0, 3, 9, 17, 40, 63]).unwrap();
    assert!(adjoint_mismatch(&pdft, &mut rng, 10) < 1e-10);
    let dense_pdft = pdft.to_dense();
    let x = gaussian(&mut rng, 64);
    assert!(dist(&apply(&pdft, &x), &apply(&dense_pdft, &x)) < 1e-10);
    let cols = [1usize, 4, 9, 16];
    let sub = ColumnSubset::new(&dense, &cols);
    assert!(adjoint_mismatch(&sub, &mut rng, 10) < 1e-10);
    assert!(PartialDft::new(8, vec![8]).is_err());
}

#[test]
fn greedy_solvers_recover_most_supports() {
    // Q >= 4 S ln M with S = 4, M = 256
    let (q, m, s) = (96, 256, 4);
    assert!(q as f64 >= 4.0 * s as f64 * (m as f64).ln());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut omp_ok, mut cosamp_ok) = (0, 0);
    for _ in 0..100 {
        let mut rows: Vec<usize> = sample(&mut rng, m, q).into_vec();
        rows.sort_unstable();
        let op = PartialDft::new(m, rows).unwrap();
        let mut support: Vec<usize> = sample(&mut rng, m, s).into_vec();
        support.sort_unstable();
        let mut x = vec![zero(); m];
        for &j in &support {
            x[j] = gaussian(&mut rng, 1)[0];
        }
        let y = apply(&op, &x);
        if omp(&op, &y, s).unwrap().support == support {
            omp_ok += 1;
        }
        if cosamp(&op, &y, s, 15, 50).unwrap().support == support {
            cosamp_ok += 1;
        }
    }
    assert!(omp_ok >= 90, "omp {omp_ok}/100");
    assert!(cosamp_ok >= 90, "cosamp {cosamp_ok}/100");
}

#[test]
fn solver_spec_dispatch() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (op, x, support) = partial_dft_instance(&mut rng, 64, 256, 5);
    let y = apply(&op, &x);
    for spec in [
        SolverSpec::Omp { sparsity: 5 },
        SolverSpec::Cosamp {
            sparsity: 5,
            max_iter: 15,
            lsqr_iter: 50,
        },
    ] {
        let sol = spec.solve(&op, &y).unwrap();
        assert_eq!(sol.support, support, "{}", spec.name());
    }
    let lasso = SolverSpec::Lasso {
        lambda_rel: 0.01,
        max_iter: 2000,
        tol: 1e-12,
    };
    assert_eq!(lasso.name(), "lasso");
    let sol = lasso.solve(&op, &y).unwrap();
    assert!(dist(&sol.x_hat, &x) < 0.2 * norm2(&x));
}

#[test]
fn sparsity_and_pilot_bounds() {
    assert_eq!(sparsity_estimate(2048, 8192).unwrap(), 262);
    assert_eq!(sparsity_estimate(100, 10).unwrap(), 50);
    assert_eq!(sparsity_estimate(1, 2).unwrap(), 2);
    // J D = 3 with C = gamma = 1, eta = 1/e: (ln 3)^4 mu^2 S
    let e = std::f64::consts::E;
    let b1 = pilot_count_bound(1, 3, 1, 1.0, 1.0, 1.0 / e, 1.0);
    assert!((b1 - 3f64.ln().powi(4)).abs() < 1e-12);
    assert!((pilot_count_bound(2, 3, 1, 1.0, 1.0, 1.0 / e, 1.0) - 2.0 * b1).abs() < 1e-12);
    let ratio = pilot_count_bound(10, 16, 8, 2.237, 0.5, 0.1, 2.0) / pilot_count_bound(10, 16, 8, 1.0, 0.5, 0.1, 2.0);
    assert!((ratio - 5.004).abs() < 1e-3);
}
