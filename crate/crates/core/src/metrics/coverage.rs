use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::AngularProfile;

pub const MIN_PROFILE_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub mean_db: f64,
    /// Population standard deviation, dB.
    pub std_db: f64,
    pub min_db: f64,
    /// Fraction of samples above -10 dB.
    pub frac_above_minus10: f64,
}

impl CoverageStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

/// Fraction of `values` strictly above `level_db`.
pub fn frac_above(values: &[f64], level_db: f64) -> f64 {
    values.iter().filter(|&&v| v > level_db).count() as f64 / values.len().max(1) as f64
}

/// Descriptive statistics of a normalized profile (all in dB).
pub fn coverage_stats(profile: &AngularProfile) -> Result<CoverageStats> {
    let v = &profile.values;
    if v.len() < MIN_PROFILE_SAMPLES {
        return Err(Error::param(
            "profile",
            format!("{} samples, need at least {MIN_PROFILE_SAMPLES}", v.len()),
        ));
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok(CoverageStats {
        mean_db: mean,
        std_db: var.sqrt(),
        min_db: v.iter().copied().fold(f64::INFINITY, f64::min),
        frac_above_minus10: frac_above(v, -10.0),
    })
}
