//! Pilot-aided compressive channel estimators.

mod dd;
mod diagonal;
mod equalizer;
mod pilots;

pub use dd::{
    build_dd_measurement, decision_directed_estimate, decision_directed_estimate_with, reconstruct_h_from_t, relative_change, reliability,
    reliable_set, DdConfig, DdOutcome, DdRound, ExtendedPilots, MeasurementProblem,
};
pub use diagonal::{coefficient_column, coefficients_to_f, estimate_diagonal, measurement_matrix, DiagonalEstimate};
pub use equalizer::{ici_equalize_lsqr, one_tap_equalize};
pub use pilots::{draw_pilots, ls_pilot_estimates, PilotSet, SubsampledGrid};
