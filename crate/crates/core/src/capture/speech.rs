use rand_distr::{Distribution, StandardNormal};

use super::mic::spl_to_rms;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::rng::{self, streams};
use crate::scenario::SpeechSource;
use crate::signal::fir::{design_lowpass, filter_same};
use crate::signal::{white_gaussian, SampledSignal};

/// Band of the synthetic speech-shaped noise, Hz.
pub const SPEECH_BAND: (f64, f64) = (150.0, 4_000.0);
/// Fraction of each word window during which the talker is voiced.
pub const VOICED_FRACTION: f64 = 0.85;

/// Number of whole words in `duration` seconds.
pub fn word_count(speech: &SpeechSource, duration: f64) -> usize {
    (duration / speech.word_duration + 1e-9).floor() as usize
}

/// Per-word loudness offsets in dB (zero-mean Gaussian, `word_level_spread_db`).
pub fn word_levels_db(speech: &SpeechSource, n_words: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, streams::WORD_LEVELS, 0);
    (0..n_words)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            speech.word_level_spread_db * z
        })
        .collect()
}

/// Speech level arriving at `point`, dB SPL (spherical spreading only;
/// air absorption is negligible in the audible band at these ranges).
pub fn speech_level_at(speech: &SpeechSource, point: Vec3) -> Result<f64> {
    let d = speech.position.distance(point);
    if !(d > 0.0) {
        return Err(Error::CoincidentPoint { r: d });
    }
    Ok(speech.level_dba_at_1m - 20.0 * d.log10())
}

/// Speech-shaped noise arriving at `point`: band-limited noise gated on
/// for [`VOICED_FRACTION`] of each word window, each word at its own
/// level. Voiced segments have RMS equal to the word's level.
pub fn synth_speech(speech: &SpeechSource, point: Vec3, duration: f64, fs: f64, seed: u64) -> Result<SampledSignal> {
    if !(duration > 0.0) {
        return Err(Error::param("duration", format!("{duration} s must be positive")));
    }
    if !(fs > 2.0 * SPEECH_BAND.1) {
        return Err(Error::SampleRate {
            fs,
            required: 2.0 * SPEECH_BAND.1,
        });
    }
    let level = speech_level_at(speech, point)?;
    let n = (duration * fs).round() as usize;
    let hi = design_lowpass(fs, SPEECH_BAND.1, 500.0, 60.0, 0);
    let lo = design_lowpass(fs, SPEECH_BAND.0, 100.0, 60.0, 0);
    let pad = hi.len().max(lo.len());
    let white = white_gaussian(n + 2 * pad, seed, streams::SPEECH, 0);
    let a = filter_same(&white, &hi);
    let b = filter_same(&white, &lo);
    let band: Vec<f64> = (pad..pad + n).map(|i| a[i] - b[i]).collect();
    let rms = crate::signal::mean_square(&band).sqrt();

    let words = word_count(speech, duration);
    let offsets = word_levels_db(speech, words, seed);
    let word_len = speech.word_duration * fs;
    let samples = band
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let pos = i as f64 / word_len;
            let w = pos.floor() as usize;
            if w >= words || pos - w as f64 >= VOICED_FRACTION {
                return 0.0;
            }
            v / rms * spl_to_rms(level + offsets[w])
        })
        .collect();
    Ok(SampledSignal::new(fs, samples))
}
