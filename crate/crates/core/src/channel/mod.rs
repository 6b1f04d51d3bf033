//! Doubly selective channel models and their multicarrier system response.

mod kernels;
mod synth;
mod system;

pub use kernels::{doppler_leakage, phi_kernel, psi_kernel, FilterModel};
pub use synth::{
    add_awgn, apply_channel, apply_channel_awgn, inverse_spreading, noise_variance_for, spreading,
    synth_diffuse, synth_specular, ChannelRealization, DiffuseSpec, ScattererEnsemble,
    ScattererPath, SpreadingFunction,
};
pub use system::{
    accumulate_delay, banded_coefficients, banded_from_taps, diagonal_coefficients, fold_to_f, synthesize_from_f,
    BandedChannel, FCoefficients,
};
