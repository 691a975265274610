use serde::{Deserialize, Serialize};

use super::mic::{nonlinear_transform, MicrophoneModel};
use crate::error::{Error, Result};
use crate::rng::streams;
use crate::signal::fir::{design_lowpass_to_edge, filter_same};
use crate::signal::{white_gaussian, SampledSignal, PASSBAND_RATE};

/// Stopband attenuation of the anti-aliasing filter.
pub const LPF_STOPBAND_DB: f64 = 100.0;
/// Filter order at the passband rate; scaled with the sample rate.
pub const LPF_ORDER_AT_PASSBAND: usize = 1024;

fn lpf_taps(fs: f64, cutoff: f64) -> Vec<f64> {
    let min_order = (LPF_ORDER_AT_PASSBAND as f64 * fs / PASSBAND_RATE).round() as usize;
    design_lowpass_to_edge(fs, cutoff, 0.1 * cutoff, LPF_STOPBAND_DB, min_order)
}

/// Linear-phase low-pass; the stopband starts at `cutoff`, the passband is
/// flat to at least `0.9 cutoff`.
pub fn lowpass_filter(s: &SampledSignal, cutoff: f64) -> Result<SampledSignal> {
    if !(cutoff > 0.0 && cutoff < s.sample_rate / 2.0) {
        return Err(Error::param(
            "cutoff",
            format!("{cutoff} Hz not below Nyquist {} Hz", s.sample_rate / 2.0),
        ));
    }
    let taps = lpf_taps(s.sample_rate, cutoff);
    Ok(SampledSignal {
        sample_rate: s.sample_rate,
        samples: filter_same(&s.samples, &taps),
        t0: s.t0,
    })
}

/// The taps [`lowpass_filter`] uses, for inspecting its response.
pub fn lowpass_taps(fs: f64, cutoff: f64) -> Vec<f64> {
    lpf_taps(fs, cutoff)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub scenario_id: String,
    pub mic_id: usize,
    pub seed: u64,
}

/// A signal as the microphone stores it, at `fs_record`.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub signal: SampledSignal,
    pub provenance: Provenance,
}

/// Passband samples per recorded sample.
fn decimation(mic: &MicrophoneModel, fs_in: f64) -> Result<usize> {
    let ratio = fs_in / mic.fs_record;
    let factor = ratio.round();
    if factor < 1.0 || (ratio - factor).abs() > 1e-9 {
        return Err(Error::RateMismatch {
            a: fs_in,
            b: mic.fs_record,
        });
    }
    Ok(factor as usize)
}

/// Transducer nonlinearity, mic self-noise, anti-aliasing low-pass, then
/// decimation to `fs_record`.
///
/// The noise is injected ahead of the filter with a level chosen so the
/// recorded noise power equals `noise_floor_db`; the recording therefore
/// has nothing above `lpf_cutoff` beyond the filter's stopband leakage.
pub fn capture_recording(mic: &MicrophoneModel, incident: &SampledSignal, provenance: Provenance) -> Result<Recording> {
    let fs = incident.sample_rate;
    if !(fs > 2.0 * mic.lpf_cutoff) {
        return Err(Error::SampleRate {
            fs,
            required: 2.0 * mic.lpf_cutoff,
        });
    }
    if let Some(v) = mic.violations().into_iter().next() {
        return Err(Error::param("mic", v));
    }
    let factor = decimation(mic, fs)?;
    let mut y = nonlinear_transform(mic, incident).samples;
    let noise_var = 10f64.powf(mic.noise_floor_db / 10.0) * fs / (2.0 * mic.lpf_cutoff);
    let sigma = noise_var.sqrt();
    let noise = white_gaussian(y.len(), provenance.seed, streams::MIC_NOISE, provenance.mic_id as u64);
    for (v, n) in y.iter_mut().zip(noise) {
        *v += sigma * n;
    }
    let filtered = filter_same(&y, &lpf_taps(fs, mic.lpf_cutoff));
    let samples: Vec<f64> = filtered.into_iter().step_by(factor).collect();
    Ok(Recording {
        signal: SampledSignal {
            sample_rate: mic.fs_record,
            samples,
            t0: incident.t0,
        },
        provenance,
    })
}

/// Record jam and speech arriving together.
pub fn mix_and_record(
    mic: &MicrophoneModel,
    jam: &SampledSignal,
    speech: &SampledSignal,
    provenance: Provenance,
) -> Result<Recording> {
    let sum = jam.add(speech)?;
    capture_recording(mic, &sum, provenance)
}

/// Recorded (mean-removed) baseband power of AM-noise jamming whose
/// carrier arrives with RMS pressure `carrier_rms` and depth `m`.
///
/// With unit-RMS Gaussian modulating noise `n`, the square-law term gives
/// `a2 A^2 (m n + m^2 (n^2 - 1) / 2)` with `A = sqrt(2) carrier_rms`, whose
/// power is `a2^2 A^4 (m^2 + m^4 / 2)`. Odd-order terms land at the carrier
/// and its harmonics, outside the audio band.
pub fn recorded_jam_power(mic: &MicrophoneModel, carrier_rms: f64, m: f64) -> f64 {
    let a_sq = 2.0 * carrier_rms * carrier_rms;
    mic.a2 * mic.a2 * a_sq * a_sq * (m * m + m.powi(4) / 2.0)
}

/// Recorded power of speech arriving with RMS pressure `speech_rms`.
pub fn recorded_speech_power(mic: &MicrophoneModel, speech_rms: f64) -> f64 {
    mic.a1 * mic.a1 * speech_rms * speech_rms
}
