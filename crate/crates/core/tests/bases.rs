use ddchan_core::bases::{
    c_vector_sets, c_vectors, c_vectors_with, combined_basis, concentration, dft_basis, dft_function,
    dft_matrix, dpss, group_c_sets, hermitian_l1_objective, hermitian_l1_step, l1_cost, optimize_matrix,
    optimized_basis, stat_weights, vartheta_dpss, Dictionary, DopplerGrid, OptimizeParams, StatPrior,
};
use ddchan_core::channel::{phi_kernel, FilterModel};
use ddchan_core::frame::McConfig;
use ddchan_core::linalg::{cis2pi, CMatrix, FftPair};
use ddchan_core::C64;

fn small_cfg() -> McConfig {
    McConfig::cp_ofdm(16, 20, 8).unwrap()
}

/// alpha_i = (1/J) sum_lambda c[lambda] e^{-j2pi lambda i / J}, i = -J/2..J/2-1
fn unfold(c: &[C64]) -> Vec<C64> {
    let j = c.len() as i64;
    (-j / 2..j - j / 2)
        .map(|i| {
            c.iter()
                .enumerate()
                .map(|(lambda, v)| v * cis2pi(-((lambda as i64 * i) as f64) / j as f64))
                .sum::<C64>()
                / j as f64
        })
        .collect()
}

#[test]
fn dft_basis_small_sizes() {
    let b1 = dft_basis(1, 3).unwrap();
    assert_eq!(b1.matrix(2)[(0, 0)], C64::new(1.0, 0.0));
    let b2 = dft_matrix(2);
    let s = 1.0 / 2f64.sqrt();
    // rows indexed by i = -1, 0
    assert!((b2[(0, 0)] - C64::new(s, 0.0)).norm() < 1e-15);
    assert!((b2[(0, 1)] - C64::new(-s, 0.0)).norm() < 1e-15);
    assert!((b2[(1, 0)] - C64::new(s, 0.0)).norm() < 1e-15);
    assert!((b2[(1, 1)] - C64::new(s, 0.0)).norm() < 1e-15);
    for j in [1, 2, 4, 8, 16, 32] {
        assert!(dft_basis(j, 2).unwrap().unitarity_residual() < 1e-12);
    }
    assert!(dft_basis(0, 1).is_err());
}

#[test]
fn doppler_grid_is_half_spaced() {
    let g = DopplerGrid::new(160, 0.03).unwrap();
    assert!((g.nu_delta - 1.0 / 320.0).abs() < 1e-18);
    // ceil(0.03 * 320) = 10
    assert_eq!(g.d_max, 10);
    assert_eq!(g.len(), 21);
}

#[test]
fn canonical_doppler_gives_one_sparse_coefficients() {
    let cfg = small_cfg();
    let n_r = cfg.n_r() as f64;
    let fft = FftPair::new(cfg.n_r());
    let freqs: Vec<f64> = (-3..=3).map(|d| d as f64 / n_r).collect();
    for m in 0..4 {
        let cs = c_vectors_with(&cfg, &freqs, m, 8, &fft).unwrap();
        for (d, c) in (-3i64..=3).zip(&cs) {
            let alpha = unfold(c);
            let peak = alpha.iter().map(|a| a.norm()).fold(0.0, f64::max);
            let slot = (d + 4) as usize;
            assert!((alpha[slot].norm() - peak).abs() < 1e-12);
            for (i, a) in alpha.iter().enumerate() {
                if i != slot {
                    assert!(a.norm() < 1e-9 * peak, "m={m} d={d} i={i}");
                }
            }
        }
    }
}

#[test]
fn zero_doppler_concentrates_at_center() {
    let cfg = small_cfg();
    let c = &c_vectors_with(&cfg, &[0.0], 1, 8, &FftPair::new(cfg.n_r())).unwrap()[0];
    let alpha = unfold(c);
    let peak = alpha[4].norm();
    assert!(peak > 0.1);
    for (i, a) in alpha.iter().enumerate() {
        if i != 4 {
            assert!(a.norm() < 1e-9 * peak);
        }
    }
}

#[test]
fn cp_ofdm_c_vectors_identical_within_prefix() {
    let cfg = small_cfg();
    let grid = DopplerGrid::new(cfg.n_r(), 0.04).unwrap();
    let sets = c_vector_sets(&cfg, &grid, 5, 8).unwrap();
    for m in 1..5 {
        for (a, b) in sets[0].iter().zip(&sets[m]) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
    let (distinct, assignment) = group_c_sets(sets);
    assert_eq!(distinct.len(), 1);
    assert_eq!(assignment, vec![0; 5]);

    // beyond the prefix the sets differ
    let sets = c_vector_sets(&cfg, &grid, 7, 8).unwrap();
    let (distinct, _) = group_c_sets(sets);
    assert!(distinct.len() > 1);
}

#[test]
fn canonical_grid_is_fixed_point_of_optimization() {
    let cfg = small_cfg();
    let n_r = cfg.n_r() as f64;
    let freqs: Vec<f64> = (-4..=4).map(|d| d as f64 / n_r).collect();
    let cs = c_vectors_with(&cfg, &freqs, 0, 8, &FftPair::new(cfg.n_r())).unwrap();
    let (b, trace) = optimize_matrix(&cs, &OptimizeParams::default()).unwrap();
    let initial = l1_cost(&dft_matrix(8), &cs);
    assert_eq!(trace[0], initial);
    assert!((trace.last().unwrap() - initial).abs() <= 1e-12 * initial);
    assert!((b - dft_matrix(8)).iter().all(|v| v.norm() < 1e-12));
}

#[test]
fn optimized_basis_improves_on_dft_and_stays_unitary() {
    let cfg = small_cfg();
    let params = OptimizeParams {
        max_iter: 40,
        ..OptimizeParams::default()
    };
    let fam = optimized_basis(&cfg, 0.6 / 160.0, 4, 8, &params).unwrap();
    assert!(fam.unitarity_residual() < 1e-8);
    let grid = DopplerGrid::new(cfg.n_r(), 0.6 / 160.0).unwrap();
    let cs = c_vectors(&cfg, &grid, 0, 8).unwrap();
    let dft_cost = l1_cost(&dft_matrix(8), &cs);
    let opt_cost = l1_cost(fam.matrix(0), &cs);
    assert!(opt_cost <= dft_cost);
    assert!(opt_cost < 0.95 * dft_cost, "optimized {opt_cost} vs dft {dft_cost}");
    for trace in &fam.cost_trace {
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn hermitian_step_against_grid_search() {
    // two vectors, J = 2: compare with a brute-force scan of the 4-parameter box
    let vs = vec![
        vec![C64::new(0.8, 0.1), C64::new(0.5, -0.3)],
        vec![C64::new(-0.2, 0.6), C64::new(0.7, 0.2)],
    ];
    let rho = 0.3;
    let a = hermitian_l1_step(&vs, rho, 400);
    let obj = hermitian_l1_objective(&vs, &a);
    let f0 = hermitian_l1_objective(&vs, &CMatrix::zeros(2, 2));
    assert!(obj <= f0);

    let steps = 12;
    let mut best = f64::INFINITY;
    let val = |t: usize| -rho + 2.0 * rho * t as f64 / steps as f64;
    for a0 in 0..=steps {
        for a1 in 0..=steps {
            for xr in 0..=steps {
                for xi in 0..=steps {
                    let mut m = CMatrix::zeros(2, 2);
                    m[(0, 0)] = C64::new(val(a0), 0.0);
                    m[(1, 1)] = C64::new(val(a1), 0.0);
                    m[(0, 1)] = C64::new(val(xr), val(xi));
                    m[(1, 0)] = C64::new(val(xr), -val(xi));
                    best = best.min(hermitian_l1_objective(&vs, &m));
                }
            }
        }
    }
    // a coarse grid bounds the true optimum from above; the step should be close
    assert!(obj <= best + 0.02 * f0, "step {obj} grid {best}");
}

#[test]
fn stat_weights_point_mass() {
    let grid = DopplerGrid::new(160, 0.02).unwrap();
    let freqs = grid.frequencies();
    let nd = freqs.len();
    let v0 = 3;
    let tau0 = 2.3;
    let mut pdf = vec![0.0; nd];
    pdf[v0] = 1.0 / grid.nu_delta;
    let prior = StatPrior::new(vec![tau0], vec![1.0], freqs.clone(), vec![grid.nu_delta; nd], pdf, vec![1.0; nd]).unwrap();
    let model = FilterModel::rrc(0.25).unwrap();
    let g = stat_weights(&prior, model, 6, &grid).unwrap();
    for m in 0..6 {
        let expect = phi_kernel(model, freqs[v0], m as f64 - tau0).abs() / grid.nu_delta;
        assert!((g[v0][m] - expect).abs() < 1e-12 * expect.max(1.0));
        for (v, row) in g.iter().enumerate() {
            if v != v0 {
                assert_eq!(row[m], 0.0);
            }
        }
    }
}

#[test]
fn stat_weights_uniform_prior_flat_in_delay() {
    let grid = DopplerGrid::new(640, 0.01).unwrap();
    let model = FilterModel::rrc(0.5).unwrap();
    let prior = StatPrior::uniform(0.0, 127.0, 127 * 16, &[(-0.01, 0.01)], &grid, 2.0).unwrap();
    let g = stat_weights(&prior, model, 128, &grid).unwrap();
    // independent oracle: fine trapezoid of |phi(m - tau)| over [0, 127]
    let oracle = |m: f64| {
        let n = 127 * 64;
        let h = 127.0 / n as f64;
        (0..=n)
            .map(|t| {
                let w = if t == 0 || t == n { 0.5 } else { 1.0 };
                w * h * phi_kernel(model, 0.0, m - t as f64 * h).abs()
            })
            .sum::<f64>()
    };
    let row = &g[grid.len() / 2];
    let ratio0 = row[64] / oracle(64.0);
    for m in [20usize, 40, 64, 90, 107] {
        let r = row[m] / oracle(m as f64);
        assert!((r / ratio0 - 1.0).abs() < 1e-3, "m={m}");
    }
    assert!((row[30] / row[90] - 1.0).abs() < 1e-3);

    let mut zero = prior.clone();
    zero.pdf.iter_mut().for_each(|p| *p = 0.0);
    assert!(stat_weights(&zero, model, 4, &grid).is_err());
}

fn sinc_concentration(v: &[f64], w: f64) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            let k = if a == b {
                2.0 * w
            } else {
                let d = a as f64 - b as f64;
                (2.0 * std::f64::consts::PI * w * d).sin() / (std::f64::consts::PI * d)
            };
            s += v[a] * v[b] * k;
        }
    }
    s
}

#[test]
fn dpss_small_case() {
    let seqs = dpss(8, 0.125, 8).unwrap();
    for a in 0..8 {
        for b in 0..8 {
            let g: f64 = seqs[a].iter().zip(&seqs[b]).map(|(x, y)| x * y).sum();
            let t = if a == b { 1.0 } else { 0.0 };
            assert!((g - t).abs() < 1e-8);
        }
    }
    let lam: Vec<f64> = seqs.iter().map(|s| sinc_concentration(s, 0.125)).collect();
    assert!(lam.windows(2).all(|w| w[0] > w[1]), "{lam:?}");
    for (s, l) in seqs.iter().zip(&lam) {
        assert!((concentration(s, 0.125) - l).abs() < 1e-10);
    }
    let first = &seqs[0];
    assert!(first.iter().all(|&x| x > 0.0) || first.iter().all(|&x| x < 0.0));
    assert!(dpss(8, 0.5, 1).is_err());
    assert!(dpss(8, 0.0, 1).is_err());
}

#[test]
fn combined_basis_small() {
    let n_r = 256;
    let nu_max = 2.5 / n_r as f64;
    let cb = combined_basis(n_r, nu_max, 2).unwrap();
    assert_eq!(cb.j0(), 2);
    assert_eq!(cb.j(), 6);
    for (slot, d) in (-2i64..=2).enumerate() {
        assert_eq!(cb.function(slot), dft_function(n_r, d).as_slice());
    }
    assert!(cb.gram_residual() < 1e-6);
    for d in -2i64..=2 {
        let th = cb.vartheta(d as f64 / n_r as f64);
        for (slot, v) in th.iter().take(5).enumerate() {
            if slot as i64 == d + 2 {
                assert!((v.norm() - (n_r as f64).sqrt()).abs() < 1e-9);
            } else {
                assert!(v.norm() < 1e-9);
            }
        }
    }
    assert!(combined_basis(n_r, nu_max, 1).is_err());
    assert!(combined_basis(8, 3.0 / 8.0, 4).is_err());
}

#[test]
fn combined_basis_large_scale() {
    let n_r = 40960;
    let nu_max = 0.2 / 2048.0;
    let cb = combined_basis(n_r, nu_max, 13).unwrap();
    assert_eq!(cb.j0(), 4);
    assert_eq!(cb.j(), 21);
    assert!(cb.gram_residual() < 1e-6);

    let nu = 0.115 / 2048.0;
    let outside = cb.energy_outside(nu);
    assert!(outside <= 0.01 * n_r as f64, "outside {outside}");

    // higher-order DPSS are effectively orthogonal to the explicit functions
    let tail = dpss(n_r, nu_max, 25).unwrap();
    for s in &tail[21..] {
        let s: Vec<C64> = s.iter().map(|&x| C64::new(x, 0.0)).collect();
        for f in cb.functions() {
            let ip: C64 = f.iter().zip(&s).map(|(a, b)| a.conj() * b).sum();
            assert!(ip.norm() <= 1e-3, "{}", ip.norm());
        }
    }
    let th = vartheta_dpss(1024, 0.01, 0.0, 3).unwrap();
    assert_eq!(th.len(), 3);
}

#[test]
fn dictionary_text_round_trip() {
    let cfg = small_cfg();
    let params = OptimizeParams {
        max_iter: 10,
        ..OptimizeParams::default()
    };
    let fam = optimized_basis(&cfg, 0.03, 7, 8, &params).unwrap();
    let dict = Dictionary::Family { basis: fam, n_r: cfg.n_r() };
    let text = dict.to_text();
    let back = Dictionary::from_text(&text).unwrap();
    assert_eq!(back, dict);
    assert_eq!(back.to_text(), text);

    let cb = Dictionary::Combined(combined_basis(128, 1.5 / 128.0, 3).unwrap());
    let text = cb.to_text();
    let back = Dictionary::from_text(&text).unwrap();
    assert_eq!(back, cb);
    assert_eq!(back.to_text(), text);

    assert!(Dictionary::from_text("nonsense").is_err());
    let truncated: String = text.lines().take(20).collect::<Vec<_>>().join("\n");
    assert!(Dictionary::from_text(&truncated).is_err());
}
