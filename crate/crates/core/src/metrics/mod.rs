//! Scoring: blind spots on power maps, angular coverage statistics and the
//! threshold word-error model.

mod blindspot;
mod coverage;
mod wer;

pub use blindspot::{
    detect_blind_spots, BlindCell, BlindRegion, BlindSpotReport, DEFAULT_NEIGHBORHOOD, DEFAULT_THRESHOLD_DB,
};
pub use coverage::{coverage_stats, frac_above, CoverageStats, MIN_PROFILE_SAMPLES};
pub use wer::{
    calibrate_tau, speech_quality_proxy, wer_proxy, word_disruption, WerEstimate, WerModel, DEFAULT_BASELINE,
    DEFAULT_RHO, DEFAULT_WORD_DURATION, TAU_RESOLUTION,
};
