use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion::SJRSeries;

/// Recognition error rate with no jamming.
pub const DEFAULT_BASELINE: f64 = 0.30;
pub const DEFAULT_RHO: f64 = 0.5;
pub const DEFAULT_WORD_DURATION: f64 = 0.4;
/// Resolution of the tau search, dB.
pub const TAU_RESOLUTION: f64 = 0.1;

/// Threshold model turning per-frame SJR into word errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WerModel {
    /// A frame counts as jammed when its SJR exceeds this, dB.
    pub tau_db: f64,
    /// Fraction of a word's frames that must be jammed.
    pub rho: f64,
    pub baseline: f64,
    /// Seconds.
    pub word_duration: f64,
}

impl Default for WerModel {
    fn default() -> Self {
        Self {
            tau_db: 0.0,
            rho: DEFAULT_RHO,
            baseline: DEFAULT_BASELINE,
            word_duration: DEFAULT_WORD_DURATION,
        }
    }
}

impl WerModel {
    pub fn with_tau(self, tau_db: f64) -> Self {
        Self { tau_db, ..self }
    }

    /// Disruption then WER for one series.
    pub fn estimate(&self, sjr: &SJRSeries) -> Result<WerEstimate> {
        let words = word_disruption(sjr, self.word_duration, self.tau_db, self.rho)?;
        wer_proxy(&words, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WerEstimate {
    pub wer: f64,
    pub disrupted_words: usize,
    pub total_words: usize,
    pub tau_db: f64,
    pub rho: f64,
    pub baseline: f64,
}

impl WerEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serializes")
    }
}

/// Split the series into consecutive `word_duration` windows (whole words
/// only) and flag each word in which at least `rho` of the frames have
/// SJR above `tau_db`.
pub fn word_disruption(sjr: &SJRSeries, word_duration: f64, tau_db: f64, rho: f64) -> Result<Vec<bool>> {
    if sjr.is_empty() {
        return Err(Error::Missing("SJR frames"));
    }
    if !(word_duration > 0.0) {
        return Err(Error::param("word_duration", "must be positive"));
    }
    let dt = sjr.frame_period();
    let t0 = sjr.times[0];
    let span = sjr.len() as f64 * dt;
    let n_words = (span / word_duration + 1e-9).floor() as usize;
    if n_words == 0 {
        return Err(Error::param(
            "sjr",
            format!("series of {span} s is shorter than one word ({word_duration} s)"),
        ));
    }
    let mut hits = vec![0usize; n_words];
    let mut frames = vec![0usize; n_words];
    for (t, v) in sjr.times.iter().zip(&sjr.sjr_db) {
        let w = ((t - t0) / word_duration + 1e-9).floor() as usize;
        if w < n_words {
            frames[w] += 1;
            if *v > tau_db {
                hits[w] += 1;
            }
        }
    }
    Ok(hits
        .iter()
        .zip(&frames)
        .map(|(&h, &n)| n > 0 && h as f64 >= rho * n as f64 - 1e-9)
        .collect())
}

/// `baseline + (1 - baseline) * disrupted fraction`, clamped to [0, 1].
pub fn wer_proxy(disruption: &[bool], model: &WerModel) -> Result<WerEstimate> {
    if disruption.is_empty() {
        return Err(Error::Missing("words"));
    }
    let disrupted = disruption.iter().filter(|&&d| d).count();
    let total = disruption.len();
    let frac = disrupted as f64 / total as f64;
    Ok(WerEstimate {
        wer: (model.baseline + (1.0 - model.baseline) * frac).clamp(0.0, 1.0),
        disrupted_words: disrupted,
        total_words: total,
        tau_db: model.tau_db,
        rho: model.rho,
        baseline: model.baseline,
    })
}

/// Largest tau (on a 0.1 dB grid) at which the calibration series still
/// reaches `target_wer`.
///
/// Raising tau can only un-jam frames, so WER falls as tau rises; the
/// largest qualifying tau is the strictest threshold consistent with the
/// anchor.
pub fn calibrate_tau(calibration: &SJRSeries, target_wer: f64, model: &WerModel) -> Result<f64> {
    let wer_at = |k: i64| -> Result<f64> { Ok(model.with_tau(k as f64 * TAU_RESOLUTION).estimate(calibration)?.wer) };
    let lo_db = calibration.sjr_db.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi_db = calibration.sjr_db.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    if !(lo_db.is_finite() && hi_db.is_finite()) {
        return Err(Error::param("calibration", "non-finite SJR"));
    }
    let mut lo = (lo_db / TAU_RESOLUTION).floor() as i64;
    let mut hi = (hi_db / TAU_RESOLUTION).ceil() as i64;
    let best = wer_at(lo)?;
    if best < target_wer {
        return Err(Error::Unattainable {
            target: target_wer,
            achievable: best,
        });
    }
    if wer_at(hi)? >= target_wer {
        return Err(Error::param(
            "target_wer",
            format!("{target_wer} is reached with no jamming at all"),
        ));
    }
    // invariant: wer(lo) >= target > wer(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if wer_at(mid)? >= target_wer {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as f64 * TAU_RESOLUTION)
}

/// Breakpoints of the quality map, (mean SJR dB, score).
const QUALITY_KNOTS: [(f64, f64); 5] = [(-40.0, 4.5), (-15.0, 4.0), (0.0, 2.0), (15.0, 0.5), (40.0, -0.5)];

/// PESQ-range stand-in driven only by mean SJR. Not a PESQ
/// implementation; it is a fixed monotone map onto [-0.5, 4.5].
pub fn speech_quality_proxy(sjr_mean_db: f64) -> f64 {
    let k = &QUALITY_KNOTS;
    if sjr_mean_db.is_nan() {
        return k[k.len() - 1].1;
    }
    if sjr_mean_db <= k[0].0 {
        return k[0].1;
    }
    for w in k.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if sjr_mean_db <= x1 {
            return y0 + (y1 - y0) * (sjr_mean_db - x0) / (x1 - x0);
        }
    }
    k[k.len() - 1].1
}
