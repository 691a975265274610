//! Jamming waveform synthesis: band-limited noise, AM onto the ultrasonic
//! carrier, envelope recovery, FIR filtering and WAV export.

mod am;
pub mod fir;
mod noise;
mod wav;

pub use am::{am_modulate, envelope_edge, envelope_of};
pub use noise::{gen_bandlimited_noise, white_gaussian};
pub use wav::{write_wav, WavFormat};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default passband simulation rate.
pub const PASSBAND_RATE: f64 = 192_000.0;

/// Parameters of the AM noise jamming signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignalSpec {
    /// Hz.
    pub carrier_freq: f64,
    /// Hz; the noise occupies [0, bw] at baseband, so f_c ± bw after AM.
    pub noise_bandwidth: f64,
    /// In (0, 1].
    pub modulation_depth: f64,
    pub seed: u64,
}

impl Default for SignalSpec {
    fn default() -> Self {
        Self {
            carrier_freq: 25_000.0,
            noise_bandwidth: 1_000.0,
            modulation_depth: 0.5,
            seed: 0,
        }
    }
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_bandwidth > 0.0 && self.noise_bandwidth < self.carrier_freq) {
            return Err(Error::param(
                "noise_bandwidth",
                format!(
                    "{} Hz not in (0, carrier {} Hz)",
                    self.noise_bandwidth, self.carrier_freq
                ),
            ));
        }
        if !(self.modulation_depth > 0.0 && self.modulation_depth <= 1.0) {
            return Err(Error::param(
                "modulation_depth",
                format!("{} not in (0, 1]", self.modulation_depth),
            ));
        }
        Ok(())
    }
}

/// A uniformly sampled real signal starting at time `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub sample_rate: f64,
    pub samples: Vec<f64>,
    pub t0: f64,
}

impl SampledSignal {
    pub fn new(sample_rate: f64, samples: Vec<f64>) -> Self {
        Self {
            sample_rate,
            samples,
            t0: 0.0,
        }
    }

    pub fn zeros(sample_rate: f64, len: usize) -> Self {
        Self::new(sample_rate, vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.sample_rate
    }

    /// Mean square.
    pub fn power(&self) -> f64 {
        mean_square(&self.samples)
    }

    pub fn rms(&self) -> f64 {
        self.power().sqrt()
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Mean square after removing the mean.
    pub fn ac_power(&self) -> f64 {
        let m = self.mean();
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.samples.len() as f64
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            sample_rate: self.sample_rate,
            samples: self.samples.iter().map(|v| v * k).collect(),
            t0: self.t0,
        }
    }

    /// Sample-wise sum; both signals must share rate and length.
    pub fn add(&self, other: &SampledSignal) -> Result<Self> {
        if self.sample_rate != other.sample_rate {
            return Err(Error::RateMismatch {
                a: self.sample_rate,
                b: other.sample_rate,
            });
        }
        if self.len() != other.len() {
            return Err(Error::param(
                "samples",
                format!("length mismatch {} vs {}", self.len(), other.len()),
            ));
        }
        Ok(Self {
            sample_rate: self.sample_rate,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
            t0: self.t0,
        })
    }

    /// Drop `n` samples from each end.
    pub fn trimmed(&self, n: usize) -> Self {
        let n = n.min(self.len() / 2);
        Self {
            sample_rate: self.sample_rate,
            samples: self.samples[n..self.len() - n].to_vec(),
            t0: self.t0 + n as f64 / self.sample_rate,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }
}

pub(crate) fn mean_square(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}
