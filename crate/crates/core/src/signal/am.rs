use std::f64::consts::PI;

use super::fir::{design_lowpass, design_lowpass_to_edge, filter_same};
use super::{SampledSignal, SignalSpec};
use crate::error::{Error, Result};

/// Integer-factor upsampling by zero stuffing and windowed-sinc interpolation.
fn upsample(x: &SampledSignal, factor: usize) -> SampledSignal {
    if factor == 1 {
        return x.clone();
    }
    let fs_in = x.sample_rate;
    let fs_out = fs_in * factor as f64;
    let mut stuffed = vec![0.0; x.len() * factor];
    for (i, v) in x.samples.iter().enumerate() {
        stuffed[i * factor] = *v * factor as f64;
    }
    let taps = design_lowpass_to_edge(fs_out, fs_in / 2.0, 0.1 * fs_in, 90.0, 64 * factor);
    SampledSignal {
        sample_rate: fs_out,
        samples: filter_same(&stuffed, &taps),
        t0: x.t0,
    }
}

/// `s(t) = (1 + m n(t)) cos(2 pi f_c t)` with unit carrier amplitude.
///
/// The envelope `n` is used at its own rate when it equals `fs_out`, or
/// upsampled when `fs_out` is an integer multiple of it.
pub fn am_modulate(envelope: &SampledSignal, spec: &SignalSpec, fs_out: f64) -> Result<SampledSignal> {
    spec.validate()?;
    let required = 2.0 * (spec.carrier_freq + spec.noise_bandwidth);
    if !(fs_out > required) {
        return Err(Error::SampleRate { fs: fs_out, required });
    }
    let ratio = fs_out / envelope.sample_rate;
    let factor = ratio.round();
    if factor < 1.0 || (ratio - factor).abs() > 1e-9 {
        return Err(Error::RateMismatch {
            a: envelope.sample_rate,
            b: fs_out,
        });
    }
    let env = upsample(envelope, factor as usize);
    let m = spec.modulation_depth;
    let w = 2.0 * PI * spec.carrier_freq;
    let samples = env
        .samples
        .iter()
        .enumerate()
        .map(|(i, n)| (1.0 + m * n) * (w * env.time(i)).cos())
        .collect();
    Ok(SampledSignal {
        sample_rate: fs_out,
        samples,
        t0: env.t0,
    })
}

/// Instantaneous amplitude around carrier `f_c` by I/Q demodulation.
///
/// The I and Q products are low-passed well below `f_c` (and below any
/// alias of the `2 f_c` product) before taking the magnitude.
pub fn envelope_of(s: &SampledSignal, f_c: f64) -> Result<SampledSignal> {
    let fs = s.sample_rate;
    if !(f_c > 0.0) || !(fs > 2.0 * f_c) {
        return Err(Error::SampleRate {
            fs,
            required: 2.0 * f_c,
        });
    }
    let w = 2.0 * PI * f_c;
    let mut i_ch = Vec::with_capacity(s.len());
    let mut q_ch = Vec::with_capacity(s.len());
    for (k, v) in s.samples.iter().enumerate() {
        let (sn, cs) = (w * s.time(k)).sin_cos();
        i_ch.push(2.0 * v * cs);
        q_ch.push(-2.0 * v * sn);
    }
    // the 2 f_c product may alias; keep the stopband below wherever it lands
    let image = {
        let f = (2.0 * f_c) % fs;
        f.min(fs - f)
    };
    let stop = 0.8 * f_c.min(image);
    let taps = design_lowpass(fs, 0.6 * stop, 0.4 * stop, 90.0, 0);
    let i_f = filter_same(&i_ch, &taps);
    let q_f = filter_same(&q_ch, &taps);
    let env: Vec<f64> = i_f.iter().zip(&q_f).map(|(a, b)| a.hypot(*b)).collect();

    // judge carrier presence away from the filter transients
    let edge = if env.len() > 4 * taps.len() { taps.len() } else { 0 };
    let total = super::mean_square(&s.samples[edge..s.len() - edge]);
    if total > 0.0 {
        let carrier = super::mean_square(&env[edge..env.len() - edge]) / 2.0;
        if carrier < 1e-6 * total {
            return Err(Error::NoCarrier { f_c });
        }
    }
    Ok(SampledSignal {
        sample_rate: fs,
        samples: env,
        t0: s.t0,
    })
}

/// Samples lost at each edge of [`envelope_of`] output to filter transients.
pub fn envelope_edge(fs: f64, f_c: f64) -> usize {
    let image = {
        let f = (2.0 * f_c) % fs;
        f.min(fs - f)
    };
    let stop = 0.8 * f_c.min(image);
    design_lowpass(fs, 0.6 * stop, 0.4 * stop, 90.0, 0).len()
}
