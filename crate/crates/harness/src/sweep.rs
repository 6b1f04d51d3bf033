//! Seeded Monte Carlo sweeps: per trial a channel draw, a coded frame with
//! embedded pilots, noisy reception, every configured estimator and the
//! known-channel reference on the same received signal.

use std::time::Instant;

use ddchan_core::bases::{
    combined_basis, dft_basis, optimized_basis, stat_optimized_basis, BasisFamily, CombinedBasis, DopplerGrid,
    OptimizeParams, StatPrior,
};
use ddchan_core::channel::{
    add_awgn, apply_channel, banded_coefficients, diagonal_coefficients, noise_variance_for, synth_diffuse,
    synth_specular, BandedChannel, ChannelRealization, DiffuseSpec, FilterModel, ScattererEnsemble,
};
use ddchan_core::comms::{ber, decode_chain, encode_chain, CodecConfig, FrameLayout, MSE_FLOOR_DB};
use ddchan_core::estimators::{
    decision_directed_estimate_with, draw_pilots, estimate_diagonal, one_tap_equalize, DdConfig, PilotSet,
    SubsampledGrid,
};
use ddchan_core::frame::{demodulate, modulate, McConfig, SymbolGrid};
use ddchan_core::solvers::{sparsity_estimate, SolverSpec};
use ddchan_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ChannelKind, EstimatorKind, ExperimentConfig, FilterKind, OptimizedKind, SolverKind};
use crate::error::{HarnessError, Result};

/// One CSV row: a single estimator on a single trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub preset: String,
    pub axis: String,
    pub axis_value: f64,
    pub trial: usize,
    pub estimator: String,
    pub basis: String,
    pub solver: String,
    pub num_pilots: usize,
    pub mse_db: f64,
    pub ber: f64,
    pub ref_ber: f64,
    pub seconds: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<Row>,
    pub attempted: usize,
    pub aborted: usize,
}

/// Per-trial result before the MSE is normalized by the ensemble energy.
struct RawRow {
    estimator: String,
    basis: String,
    solver: String,
    error: f64,
    energy: f64,
    ber: f64,
    seconds: f64,
}

struct TrialOutput {
    rows: Vec<RawRow>,
    ref_ber: f64,
}

/// Everything that is fixed for one axis value.
struct Setup {
    cfg: McConfig,
    grid: SubsampledGrid,
    pilots: PilotSet,
    layout: FrameLayout,
    codec: CodecConfig,
    snr_db: f64,
    /// Normalized maximum Doppler (cycles per sample).
    nu_max: f64,
    nu_min: f64,
    model: FilterModel,
    delay_span: usize,
    dft: BasisFamily,
    generalized: Option<(BasisFamily, &'static str)>,
    combined: Option<CombinedBasis>,
}

/// Per-trial generator: ChaCha stream `axis_index * 2^32 + trial` under the
/// master seed, so any trial can be replayed on its own.
pub fn trial_rng(seed: u64, axis_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((axis_index as u64) << 32) | trial as u64);
    rng
}

fn filter_model(config: &ExperimentConfig) -> Result<FilterModel> {
    Ok(match config.channel.filter {
        FilterKind::Ideal => FilterModel::Ideal,
        FilterKind::Rrc => FilterModel::rrc(config.channel.rolloff)?,
    })
}

type BasisCache = Vec<(u64, Option<(BasisFamily, &'static str)>, Option<CombinedBasis>)>;

fn build_setup(config: &ExperimentConfig, axis_value: f64, cache: &mut BasisCache) -> Result<Setup> {
    let sys = &config.system;
    let cfg = McConfig::cp_ofdm(sys.k, sys.n, sys.l)?;
    let grid = SubsampledGrid::new(&cfg, sys.k / sys.delta_k.max(1), sys.l / sys.delta_l.max(1))?;
    let pilot_grid = if config.pilots.full_grid {
        SubsampledGrid::full(&cfg)?
    } else {
        SubsampledGrid::new(&cfg, grid.d, grid.j)?
    };
    let count = config.pilot_count(axis_value);
    let pilots = draw_pilots(&pilot_grid, count, config.pilots.seed)?;
    let codec = CodecConfig {
        soft: config.codec.soft,
        ..CodecConfig::default()
    };
    let layout = FrameLayout::new(cfg.l(), cfg.k(), &pilots, &codec)?;
    let nu_max = config.max_doppler(axis_value) / sys.k as f64;
    let nu_min = config.channel.min_doppler / sys.k as f64;
    if nu_min > nu_max {
        return Err(HarnessError::Config(format!(
            "channel.min_doppler exceeds the maximum Doppler {}",
            config.max_doppler(axis_value)
        )));
    }
    let model = filter_model(config)?;
    let delay_span = config.delay_span();
    let wants = |k: EstimatorKind| config.estimators.kinds.contains(&k);

    let key = nu_max.to_bits();
    if !cache.iter().any(|c| c.0 == key) {
        let params = OptimizeParams {
            rho0: config.basis.rho0,
            rho_min: config.basis.rho_min,
            max_iter: config.basis.max_iter,
            inner_iter: config.basis.inner_iter,
        };
        let generalized = if wants(EstimatorKind::Generalized) {
            Some(match config.basis.optimized {
                OptimizedKind::Deterministic => (optimized_basis(&cfg, nu_max, grid.d, grid.j, &params)?, "optimized"),
                OptimizedKind::Statistical => {
                    let dgrid = DopplerGrid::new(cfg.n_r(), nu_max)?;
                    let bands = if nu_min > 0.0 {
                        vec![(-nu_max, -nu_min), (nu_min, nu_max)]
                    } else {
                        vec![(-nu_max, nu_max)]
                    };
                    let hi = (delay_span - 1) as f64;
                    let prior = StatPrior::uniform(0.0, hi, delay_span, &bands, &dgrid, 1.0)?;
                    let b = stat_optimized_basis(&cfg, nu_max, grid.d, grid.j, &prior, model, &params)?;
                    (b, "stat-optimized")
                }
            })
        } else {
            None
        };
        let combined = if wants(EstimatorKind::Dd) {
            Some(combined_basis(cfg.n_r(), nu_max, config.basis.j1)?)
        } else {
            None
        };
        cache.push((key, generalized, combined));
    }
    let entry = cache.iter().find(|c| c.0 == key).expect("just inserted");
    Ok(Setup {
        dft: dft_basis(grid.j, grid.d)?,
        generalized: entry.1.clone(),
        combined: entry.2.clone(),
        cfg,
        grid,
        pilots,
        layout,
        codec,
        snr_db: config.snr_db(axis_value),
        nu_max,
        nu_min,
        model,
        delay_span,
    })
}

fn draw_channel<R: Rng + ?Sized>(config: &ExperimentConfig, setup: &Setup, rng: &mut R) -> Result<ChannelRealization> {
    let n_r = setup.cfg.n_r();
    if config.channel.kind == ChannelKind::Identity {
        return Ok(ChannelRealization::time_invariant(n_r, &[C64::new(1.0, 0.0)]));
    }
    let mut ensemble = ScattererEnsemble::standard((setup.delay_span - 1) as f64, setup.nu_max);
    ensemble.doppler_lo = setup.nu_min;
    let paths = ensemble.draw(rng);
    let specular = synth_specular(&paths, setup.model, &setup.cfg, setup.delay_span, setup.nu_max)?;
    let spec = DiffuseSpec {
        delay_span: setup.delay_span,
        max_doppler: setup.nu_max,
        power_db_below: config.channel.diffuse_db,
    };
    let diffuse = synth_diffuse(&spec, rng, &setup.cfg)?;
    Ok(specular.add(&diffuse)?)
}

fn solver_spec(config: &ExperimentConfig, kind: SolverKind, q: usize, m: usize) -> Result<SolverSpec> {
    let sc = &config.solver;
    let sparsity = if sc.sparsity > 0 {
        sc.sparsity
    } else {
        sparsity_estimate(q, m.max(2))?
    };
    Ok(match kind {
        SolverKind::Omp => SolverSpec::Omp { sparsity },
        SolverKind::Cosamp => SolverSpec::Cosamp {
            sparsity,
            max_iter: sc.cosamp_iter,
            lsqr_iter: sc.lsqr_iter,
        },
        SolverKind::Lasso => SolverSpec::Lasso {
            lambda_rel: sc.lasso_lambda_rel,
            max_iter: sc.lasso_iter,
            tol: sc.lasso_tol,
        },
    })
}

fn sq_sums(estimate: &[C64], truth: &[C64]) -> (f64, f64) {
    estimate.iter().zip(truth).fold((0.0, 0.0), |(e, n), (a, b)| (e + (a - b).norm_sqr(), n + b.norm_sqr()))
}

fn decode_ber(soft: &SymbolGrid, bits: &[u8], setup: &Setup, noise_var: f64) -> Result<f64> {
    let out = decode_chain(soft, &setup.layout, &setup.codec, noise_var.max(1e-12))?;
    Ok(ber(bits, &out)?)
}

fn run_trial(config: &ExperimentConfig, setup: &Setup, axis_index: usize, trial: usize) -> Result<TrialOutput> {
    let mut rng = trial_rng(config.seed, axis_index, trial);
    let cfg = &setup.cfg;
    let h = draw_channel(config, setup, &mut rng)?;
    let bits: Vec<u8> = (0..setup.layout.info_bits).map(|_| rng.random::<bool>() as u8).collect();
    let tx = encode_chain(&bits, &setup.layout, &setup.pilots, &setup.codec, &mut rng)?;
    let clean = apply_channel(&modulate(&tx, cfg)?, &h);
    let noise_var = if config.channel.noise {
        noise_variance_for(&clean, setup.snr_db)
    } else {
        0.0
    };
    let r = demodulate(&add_awgn(&clean, noise_var, &mut rng), cfg)?;
    // the demodulator averages K samples with weight 1/K
    let symbol_noise = noise_var / cfg.k() as f64;

    let truth = diagonal_coefficients(&h, cfg)?;
    let ref_ber = decode_ber(&one_tap_equalize(&truth, &r), &bits, setup, symbol_noise)?;
    let q = setup.pilots.len();
    let mut rows = Vec::new();

    for &kind in &config.estimators.kinds {
        match kind {
            EstimatorKind::Basic | EstimatorKind::Generalized => {
                let (basis, basis_name, name) = if kind == EstimatorKind::Basic {
                    (&setup.dft, "dft", "basic")
                } else {
                    let (b, n) = setup.generalized.as_ref().expect("built with the setup");
                    (b, *n, "generalized")
                };
                for &sk in &config.estimators.solvers {
                    let spec = solver_spec(config, sk, q, setup.grid.len())?;
                    let start = Instant::now();
                    let est = estimate_diagonal(&r, &setup.pilots, &setup.grid, basis, cfg, &spec)?;
                    let seconds = start.elapsed().as_secs_f64();
                    let (error, energy) = sq_sums(est.h_hat.values(), truth.values());
                    let ber = decode_ber(&one_tap_equalize(&est.h_hat, &r), &bits, setup, symbol_noise)?;
                    rows.push(RawRow {
                        estimator: name.into(),
                        basis: basis_name.into(),
                        solver: sk.name().into(),
                        error,
                        energy,
                        ber,
                        seconds,
                    });
                }
            }
            EstimatorKind::Dd => {
                let basis = setup.combined.as_ref().expect("built with the setup");
                let dd_sec = &config.dd;
                let band_truth = banded_coefficients(&h, cfg, dd_sec.l_max, dd_sec.k_max)?;
                let rounds = &config.estimators.rounds;
                let dd = DdConfig {
                    d: setup.delay_span,
                    l_max: dd_sec.l_max,
                    k_max: dd_sec.k_max,
                    epsilon: dd_sec.epsilon,
                    max_rounds: rounds.iter().max().copied().unwrap_or(0) + 1,
                    equalizer_iters: dd_sec.equalizer_iters,
                    omp_sparsity: 0,
                    change_tol: dd_sec.change_tol,
                };
                for &sk in &config.estimators.solvers {
                    let spec = solver_spec(config, sk, q, setup.delay_span * basis.j())?;
                    let start = Instant::now();
                    let out = decision_directed_estimate_with(&r, &setup.pilots, basis, cfg, &dd, &spec)?;
                    let seconds = start.elapsed().as_secs_f64();
                    for &big_r in rounds {
                        let round = out.round(big_r);
                        // round 0 reports the diagonal only; its off-diagonals count as zero
                        let est = if big_r == 0 {
                            BandedChannel::from_diagonal(&round.estimate.diagonal(), dd.l_max, dd.k_max)
                        } else {
                            round.estimate.clone()
                        };
                        let (error, energy) = sq_sums(est.values(), band_truth.values());
                        let ber = decode_ber(&round.soft, &bits, setup, symbol_noise)?;
                        rows.push(RawRow {
                            estimator: format!("dd_R{big_r}"),
                            basis: "dft-dpss".into(),
                            solver: sk.name().into(),
                            error,
                            energy,
                            ber,
                            seconds,
                        });
                    }
                }
            }
        }
    }
    Ok(TrialOutput { rows, ref_ber })
}

/// Runs every (axis value, trial) pair on a pool of `workers` threads
/// (rayon's default when `None`). The rows do not depend on the worker count.
pub fn run_sweep(config: &ExperimentConfig, workers: Option<usize>) -> Result<SweepResult> {
    config.validate()?;
    let mut cache = BasisCache::new();
    let setups: Vec<Setup> = config
        .sweep
        .values
        .iter()
        .map(|&v| build_setup(config, v, &mut cache))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..setups.len())
        .flat_map(|a| (0..config.trials).map(move |t| (a, t)))
        .collect();
    let work = || -> Vec<Result<TrialOutput>> {
        jobs.par_iter()
            .map(|&(a, t)| run_trial(config, &setups[a], a, t))
            .collect()
    };
    let outputs = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| HarnessError::Sweep(e.to_string()))?
            .install(work),
        None => work(),
    };

    let mut aborted = 0;
    let mut raw: Vec<(usize, usize, TrialOutput)> = Vec::with_capacity(jobs.len());
    for (&(a, t), out) in jobs.iter().zip(outputs) {
        match out {
            Ok(o) => raw.push((a, t, o)),
            Err(e) => {
                aborted += 1;
                eprintln!(
                    "warning: trial {t} at {}={} aborted: {e}",
                    config.sweep.axis.name(),
                    config.sweep.values[a]
                );
            }
        }
    }
    if aborted * 100 > jobs.len() {
        return Err(HarnessError::Sweep(format!("{aborted} of {} trials aborted", jobs.len())));
    }

    // mean reference energy per (axis value, estimator slot) over the trials
    let slots = raw.first().map_or(0, |r| r.2.rows.len());
    let mut energy = vec![(0.0, 0usize); setups.len() * slots];
    for (a, _, o) in &raw {
        for (s, row) in o.rows.iter().enumerate() {
            let e = &mut energy[a * slots + s];
            e.0 += row.energy;
            e.1 += 1;
        }
    }

    let mut rows = Vec::with_capacity(raw.len() * slots);
    for (a, t, o) in raw {
        for (s, row) in o.rows.into_iter().enumerate() {
            let (sum, n) = energy[a * slots + s];
            let mean = sum / n as f64;
            let mse_db = if row.error == 0.0 {
                MSE_FLOOR_DB
            } else {
                (10.0 * (row.error / mean).log10()).max(MSE_FLOOR_DB)
            };
            rows.push(Row {
                preset: config.preset.clone(),
                axis: config.sweep.axis.name().into(),
                axis_value: config.sweep.values[a],
                trial: t,
                estimator: row.estimator,
                basis: row.basis,
                solver: row.solver,
                num_pilots: setups[a].pilots.len(),
                mse_db,
                ber: row.ber,
                ref_ber: o.ref_ber,
                seconds: config.output.timing.then_some(row.seconds),
                seed: config.seed,
            });
        }
    }
    Ok(SweepResult {
        rows,
        attempted: jobs.len(),
        aborted,
    })
}

/// Mean over the trials of one curve point.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub axis_value: f64,
    pub estimator: String,
    pub basis: String,
    pub solver: String,
    pub trials: usize,
    /// `10 log10` of the mean linear MSE.
    pub mse_db: f64,
    /// Standard error of the mean linear MSE, relative to the mean.
    pub mse_rel_stderr: f64,
    pub ber: f64,
    pub ber_stderr: f64,
    pub ref_ber: f64,
    pub seconds: Option<f64>,
}

impl Summary {
    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.estimator, self.basis, self.solver)
    }
}

fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Groups rows by (axis value, estimator, basis, solver) in order of first
/// appearance.
pub fn summarize(rows: &[Row]) -> Vec<Summary> {
    let mut keys: Vec<(u64, &str, &str, &str)> = Vec::new();
    let mut groups: Vec<Vec<&Row>> = Vec::new();
    for row in rows {
        let key = (row.axis_value.to_bits(), row.estimator.as_str(), row.basis.as_str(), row.solver.as_str());
        match keys.iter().position(|k| *k == key) {
            Some(i) => groups[i].push(row),
            None => {
                keys.push(key);
                groups.push(vec![row]);
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let lin: Vec<f64> = g.iter().map(|r| 10f64.powf(r.mse_db / 10.0)).collect();
            let (mse, mse_se) = mean_stderr(&lin);
            let (ber, ber_se) = mean_stderr(&g.iter().map(|r| r.ber).collect::<Vec<_>>());
            let (ref_ber, _) = mean_stderr(&g.iter().map(|r| r.ref_ber).collect::<Vec<_>>());
            let seconds = g
                .iter()
                .map(|r| r.seconds)
                .collect::<Option<Vec<f64>>>()
                .map(|s| mean_stderr(&s).0);
            Summary {
                axis_value: g[0].axis_value,
                estimator: g[0].estimator.clone(),
                basis: g[0].basis.clone(),
                solver: g[0].solver.clone(),
                trials: g.len(),
                mse_db: 10.0 * mse.log10(),
                mse_rel_stderr: if mse > 0.0 { mse_se / mse } else { 0.0 },
                ber,
                ber_stderr: ber_se,
                ref_ber,
                seconds,
            }
        })
        .collect()
}
