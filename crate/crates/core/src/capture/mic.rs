use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SampledSignal;

/// Pressure normalization: 94 dB SPL (1 Pa RMS) is unit RMS.
pub const REFERENCE_SPL: f64 = 94.0;

/// RMS of a pressure at `spl` dB in normalized units.
pub fn spl_to_rms(spl: f64) -> f64 {
    10f64.powf((spl - REFERENCE_SPL) / 20.0)
}

pub fn rms_to_spl(rms: f64) -> f64 {
    REFERENCE_SPL + 20.0 * rms.log10()
}

/// Polynomial transducer, anti-aliasing low-pass and ADC.
///
/// `a1..a3` act on normalized pressure; `noise_floor_db` is the recorded
/// noise power in dB relative to unit mean square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicrophoneModel {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// Hz.
    pub lpf_cutoff: f64,
    /// Hz.
    pub fs_record: f64,
    pub noise_floor_db: f64,
}

impl Default for MicrophoneModel {
    fn default() -> Self {
        Self {
            a1: 1.0,
            a2: 0.05,
            a3: 0.001,
            lpf_cutoff: 20_000.0,
            fs_record: 48_000.0,
            noise_floor_db: -90.0,
        }
    }
}

impl MicrophoneModel {
    pub const PROFILES: [&'static str; 4] = ["default", "iphone_x", "iphone_se", "mi6"];

    /// Named phone profile. Only the ordering of `a2` across phones is
    /// meaningful; the Mi 6 is the most nonlinear.
    pub fn profile(name: &str) -> Result<Self> {
        let base = Self::default();
        match name {
            "default" | "iphone_x" => Ok(base),
            "iphone_se" => Ok(Self { a2: 0.04, ..base }),
            "mi6" => Ok(Self { a2: 0.10, ..base }),
            _ => Err(Error::Unknown {
                what: "microphone profile",
                name: name.to_string(),
            }),
        }
    }

    /// A mic with no nonlinearity.
    pub fn linear() -> Self {
        Self {
            a2: 0.0,
            a3: 0.0,
            ..Self::default()
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.a1 > 0.0) {
            out.push(format!("a1 = {} must be positive", self.a1));
        }
        if !(self.lpf_cutoff > 0.0 && self.lpf_cutoff <= self.fs_record / 2.0) {
            out.push(format!(
                "lpf_cutoff {} Hz must lie in (0, fs_record/2 = {} Hz]",
                self.lpf_cutoff,
                self.fs_record / 2.0
            ));
        }
        if !(self.a2.is_finite() && self.a3.is_finite() && self.noise_floor_db.is_finite()) {
            out.push("non-finite coefficient".into());
        }
        out
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        x * (self.a1 + x * (self.a2 + x * self.a3))
    }
}

/// `a1 s + a2 s^2 + a3 s^3`, sample by sample, at the input rate.
pub fn nonlinear_transform(mic: &MicrophoneModel, s_in: &SampledSignal) -> SampledSignal {
    SampledSignal {
        sample_rate: s_in.sample_rate,
        samples: s_in.samples.iter().map(|&x| mic.apply(x)).collect(),
        t0: s_in.t0,
    }
}
