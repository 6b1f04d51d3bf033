//! Experiment configuration, read from TOML with dotted section keys
//! (`system.K = 256`). Unknown keys are rejected.

use std::path::Path;

use serde::Deserialize;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Label written to the `preset` CSV column.
    #[serde(default = "default_preset")]
    pub preset: String,
    #[serde(default)]
    pub seed: u64,
    pub trials: usize,
    pub system: SystemConfig,
    #[serde(default)]
    pub channel: ChannelConfig,
    pub pilots: PilotConfig,
    pub estimators: EstimatorConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default)]
    pub dd: DdSection,
    #[serde(default)]
    pub codec: CodecSection,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_preset() -> String {
    "custom".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "delta_K", default = "four")]
    pub delta_k: usize,
    #[serde(rename = "delta_L", default = "one")]
    pub delta_l: usize,
}

fn four() -> usize {
    4
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Random specular paths plus the diffuse brick.
    Ensemble,
    /// `h[n,m] = delta[m]`.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Ideal,
    Rrc,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    /// Maximum Doppler in subcarrier spacings (`nu_max T_s K`).
    pub max_doppler: f64,
    /// Specular Dopplers are drawn with magnitude in
    /// `[min_doppler, max_doppler]`, same units.
    pub min_doppler: f64,
    /// Delays are drawn from `[0, delay_span - 1]`; 0 means `K/4`.
    pub delay_span: usize,
    pub filter: FilterKind,
    pub rolloff: f64,
    /// Diffuse power below the specular part in dB; `inf` disables it.
    pub diffuse_db: f64,
    pub noise: bool,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            kind: ChannelKind::Ensemble,
            max_doppler: 0.03,
            min_doppler: 0.0,
            delay_span: 0,
            filter: FilterKind::Rrc,
            rolloff: 0.25,
            diffuse_db: 20.0,
            noise: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PilotConfig {
    pub count: Option<usize>,
    /// Fraction of all `L K` symbols, used when `count` is absent.
    pub fraction: Option<f64>,
    #[serde(default = "default_pilot_seed")]
    pub seed: u64,
    /// Place pilots anywhere on the `L x K` grid instead of the subsampled one.
    #[serde(default)]
    pub full_grid: bool,
}

fn default_pilot_seed() -> u64 {
    7
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    /// Diagonal estimator with the DFT basis.
    Basic,
    /// Diagonal estimator with an optimized basis.
    Generalized,
    /// Decision-directed estimator with the combined DFT-DPSS basis.
    Dd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Omp,
    Cosamp,
    Lasso,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Omp => "omp",
            SolverKind::Cosamp => "cosamp",
            SolverKind::Lasso => "lasso",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub kinds: Vec<EstimatorKind>,
    pub solvers: Vec<SolverKind>,
    /// Decision-directed rounds to report, each as its own estimator row.
    #[serde(default = "default_rounds")]
    pub rounds: Vec<usize>,
}

fn default_rounds() -> Vec<usize> {
    vec![0]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Sparsity for OMP and CoSaMP; 0 selects `ceil(Q / (2 log10 M))`.
    pub sparsity: usize,
    pub cosamp_iter: usize,
    pub lsqr_iter: usize,
    pub lasso_lambda_rel: f64,
    pub lasso_iter: usize,
    pub lasso_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sparsity: 0,
            cosamp_iter: 15,
            lsqr_iter: 20,
            lasso_lambda_rel: 0.02,
            lasso_iter: 300,
            lasso_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizedKind {
    /// Uses only the maximum Doppler.
    Deterministic,
    /// Weighted by a uniform prior over the channel's delay-Doppler region.
    Statistical,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BasisConfig {
    pub optimized: OptimizedKind,
    pub rho0: f64,
    pub rho_min: f64,
    pub max_iter: usize,
    pub inner_iter: usize,
    /// DPSS count `J1` of the combined basis.
    pub j1: usize,
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig {
            optimized: OptimizedKind::Deterministic,
            rho0: 0.05,
            rho_min: 1e-4,
            max_iter: 100,
            inner_iter: 200,
            j1: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DdSection {
    pub l_max: usize,
    pub k_max: usize,
    pub epsilon: f64,
    pub equalizer_iters: usize,
    pub change_tol: f64,
}

impl Default for DdSection {
    fn default() -> Self {
        DdSection {
            l_max: 0,
            k_max: 3,
            epsilon: 0.2,
            equalizer_iters: 15,
            change_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodecSection {
    /// Max-log soft demapping into the Viterbi decoder.
    pub soft: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Snr,
    Pilots,
    Doppler,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Snr => "snr",
            Axis::Pilots => "pilots",
            Axis::Doppler => "doppler",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    /// SNR in dB when the axis is not `snr`.
    #[serde(default = "default_snr")]
    pub snr_db: f64,
}

fn default_snr() -> f64 {
    20.0
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    /// Fill the `seconds` column with estimator wall-clock time. Off by
    /// default because it makes the CSV differ between runs.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn delay_span(&self) -> usize {
        if self.channel.delay_span == 0 {
            self.system.k / 4
        } else {
            self.channel.delay_span
        }
    }

    /// Pilot count at a given axis value.
    pub fn pilot_count(&self, axis_value: f64) -> usize {
        if self.sweep.axis == Axis::Pilots {
            return axis_value as usize;
        }
        match (self.pilots.count, self.pilots.fraction) {
            (Some(c), _) => c,
            (None, Some(f)) => (f * (self.system.l * self.system.k) as f64).round() as usize,
            (None, None) => 0,
        }
    }

    pub fn snr_db(&self, axis_value: f64) -> f64 {
        if self.sweep.axis == Axis::Snr {
            axis_value
        } else {
            self.sweep.snr_db
        }
    }

    /// Maximum Doppler in subcarrier spacings.
    pub fn max_doppler(&self, axis_value: f64) -> f64 {
        if self.sweep.axis == Axis::Doppler {
            axis_value
        } else {
            self.channel.max_doppler
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sweep.values.is_empty() {
            return bad("sweep.values is empty".into());
        }
        if self.sweep.values.iter().any(|v| !v.is_finite()) {
            return bad("sweep.values must be finite".into());
        }
        if self.sweep.values.windows(2).any(|w| w[1] <= w[0]) {
            return bad("sweep.values must be strictly increasing".into());
        }
        if self.sweep.axis == Axis::Pilots && self.sweep.values.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
            return bad("pilot counts must be positive integers".into());
        }
        if self.sweep.axis != Axis::Pilots && self.pilots.count.is_none() && self.pilots.fraction.is_none() {
            return bad("pilots.count or pilots.fraction is required".into());
        }
        if let Some(f) = self.pilots.fraction {
            if !(f > 0.0 && f <= 1.0) {
                return bad(format!("pilots.fraction = {f} outside (0, 1]"));
            }
        }
        if self.estimators.kinds.is_empty() || self.estimators.solvers.is_empty() {
            return bad("estimators.kinds and estimators.solvers must be nonempty".into());
        }
        if self.estimators.rounds.is_empty() {
            return bad("estimators.rounds must be nonempty".into());
        }
        let ch = &self.channel;
        if !(ch.max_doppler >= 0.0) || !(ch.min_doppler >= 0.0) || ch.min_doppler > ch.max_doppler {
            return bad("need 0 <= channel.min_doppler <= channel.max_doppler".into());
        }
        if self.delay_span() == 0 || self.delay_span() > self.system.k {
            return bad(format!("delay span {} outside 1..=K", self.delay_span()));
        }
        if ch.diffuse_db.is_nan() {
            return bad("channel.diffuse_db is NaN".into());
        }
        Ok(())
    }
}
