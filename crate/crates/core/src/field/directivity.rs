use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::bessel::jinc;

/// Attenuation at 180 degrees relative to the 90 degree value for the
/// piston's rear hemisphere; the gain decays log-linearly in between.
pub const REAR_ROLLOFF_DB: f64 = 30.0;

/// Single-element angular gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EmissionPattern {
    /// Baffled circular piston of the given radius (m).
    Piston { radius: f64 },
    /// `(off-axis degrees, linear gain)` pairs, gain 1 at 0 degrees.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl EmissionPattern {
    /// Tabulated pattern normalized so the 0 degree gain is 1.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Self {
        let g0 = samples.first().map(|s| s.1).unwrap_or(1.0);
        let samples = if g0 > 0.0 {
            samples.into_iter().map(|(a, g)| (a, g / g0)).collect()
        } else {
            samples
        };
        EmissionPattern::Tabulated { samples }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            EmissionPattern::Piston { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    out.push(format!("piston radius {radius} must be positive"));
                }
            }
            EmissionPattern::Tabulated { samples } => {
                if samples.is_empty() {
                    out.push("empty pattern table".into());
                    return out;
                }
                if samples[0].0 != 0.0 || (samples[0].1 - 1.0).abs() > 1e-12 {
                    out.push("first sample must be (0 deg, gain 1)".into());
                }
                if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    out.push("angles must be strictly increasing".into());
                }
                if samples.iter().any(|s| !(0.0..=180.0).contains(&s.0)) {
                    out.push("angles must lie in [0, 180] degrees".into());
                }
                if samples.iter().any(|s| !(0.0..=1.0).contains(&s.1)) {
                    out.push("gains must lie in [0, 1]".into());
                }
            }
        }
        out
    }
}

/// Linear gain of `pattern` at off-axis angle `theta` (radians, folded into
/// [0, pi]) for wavenumber `k` (rad/m).
pub fn directivity_gain(pattern: &EmissionPattern, theta: f64, k: f64) -> f64 {
    let theta = theta.abs().min(std::f64::consts::PI);
    match pattern {
        EmissionPattern::Piston { radius } => piston_gain(k * radius, theta),
        EmissionPattern::Tabulated { samples } => tabulated_gain(samples, theta.to_degrees()),
    }
}

/// `|2 J1(ka sin t) / (ka sin t)|` in front of the baffle.
pub fn piston_gain(ka: f64, theta: f64) -> f64 {
    if theta <= FRAC_PI_2 {
        jinc(ka * theta.sin()).abs()
    } else {
        let edge = jinc(ka).abs();
        let frac = (theta - FRAC_PI_2) / FRAC_PI_2;
        edge * 10f64.powf(-REAR_ROLLOFF_DB * frac / 20.0)
    }
}

fn tabulated_gain(samples: &[(f64, f64)], deg: f64) -> f64 {
    match samples {
        [] => 1.0,
        [only] => only.1,
        _ => {
            if deg <= samples[0].0 {
                return samples[0].1;
            }
            let last = samples[samples.len() - 1];
            if deg >= last.0 {
                return last.1;
            }
            let i = samples.partition_point(|s| s.0 <= deg);
            let (a0, g0) = samples[i - 1];
            let (a1, g1) = samples[i];
            g0 + (g1 - g0) * (deg - a0) / (a1 - a0)
        }
    }
}
