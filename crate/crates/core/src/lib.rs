//! Compressive estimation of doubly selective channels in pulse-shaping
//! multicarrier (CP-OFDM) systems.
//!
//! The crate is organised along the signal path:
//!
//! * [`frame`] – multicarrier modulator/demodulator and the cross-ambiguity function.
//! * [`channel`] – specular/diffuse channel synthesis, leakage kernels, spreading function
//!   and the equivalent system-channel coefficients.
//! * [`solvers`] – OMP, CoSaMP, FISTA-Lasso and LSQR over abstract linear operators.
//! * [`bases`] – DFT, optimized unitary and combined DFT–DPSS dictionaries.
//! * [`estimators`] – basic/generalized compressive estimators and the decision-directed
//!   ISI/ICI estimator with its banded LSQR equalizer.
//! * [`comms`] – 4-QAM mapping, convolutional coding, interleaving and error metrics.

pub mod bases;
pub mod channel;
pub mod comms;
pub mod error;
pub mod estimators;
pub mod frame;
pub mod linalg;
pub mod solvers;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
