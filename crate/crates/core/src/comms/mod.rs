//! Coded 4-QAM transmission chain around the multicarrier frame.

mod chain;
mod conv;
mod interleaver;
mod metrics;
mod qam;

pub use chain::{decode_chain, encode_chain, CodecConfig, FrameLayout};
pub use conv::ConvCode;
pub use interleaver::Interleaver;
pub use metrics::{ber, mse_normalized, MseAccumulator, MSE_FLOOR_DB};
pub use qam::{qam_decide, qam_demap_hard, qam_llr, qam_map, qam_random};
