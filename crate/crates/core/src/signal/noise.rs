use rand_distr::{Distribution, StandardNormal};

use super::fir::{design_lowpass_to_edge, filter_same};
use super::SampledSignal;
use crate::error::{Error, Result};
use crate::rng::{self, streams};

/// Stopband target of the noise-shaping filter.
const NOISE_STOPBAND_DB: f64 = 80.0;
const NOISE_MIN_ORDER: usize = 512;

/// `len` i.i.d. standard normal samples from stream `(seed, stream, sub)`.
pub fn white_gaussian(len: usize, seed: u64, stream: u64, sub: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, stream, sub);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Zero-mean, unit-RMS Gaussian noise band-limited to `[0, bw]`.
///
/// White Gaussian samples are shaped by a Kaiser-windowed sinc whose
/// stopband begins at `bw`; the filter warm-up is generated and discarded
/// so the returned sequence is stationary.
pub fn gen_bandlimited_noise(bw: f64, dur: f64, fs: f64, seed: u64) -> Result<SampledSignal> {
    if !(dur > 0.0) {
        return Err(Error::param("duration", format!("{dur} s must be positive")));
    }
    if !(bw > 0.0) {
        return Err(Error::param("bandwidth", format!("{bw} Hz must be positive")));
    }
    if !(fs > 2.0 * bw) {
        return Err(Error::SampleRate { fs, required: 2.0 * bw });
    }
    let n = (dur * fs).round() as usize;
    if n == 0 {
        return Err(Error::param("duration", "shorter than one sample"));
    }
    let taps = design_lowpass_to_edge(fs, bw, 0.2 * bw, NOISE_STOPBAND_DB, NOISE_MIN_ORDER);
    let pad = taps.len();
    let white = white_gaussian(n + 2 * pad, seed, streams::NOISE, 0);
    let shaped = filter_same(&white, &taps);
    let mut out = shaped[pad..pad + n].to_vec();
    let mean = out.iter().sum::<f64>() / n as f64;
    for v in &mut out {
        *v -= mean;
    }
    let rms = super::mean_square(&out).sqrt();
    if rms > 0.0 {
        for v in &mut out {
            *v /= rms;
        }
    }
    Ok(SampledSignal::new(fs, out))
}
