use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::signal::SampledSignal;

/// Hann-windowed periodogram power between `lo` and `hi` Hz.
pub fn band_power(x: &[f64], fs: f64, lo: f64, hi: f64) -> f64 {
    let n = x.len();
    let mut buf: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos();
            Complex64::new(v * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (0..=n / 2)
        .filter(|&k| {
            let f = k as f64 * fs / n as f64;
            f >= lo && f <= hi
        })
        .map(|k| buf[k].norm_sqr())
        .sum()
}

/// Frequency of the largest periodogram bin.
pub fn peak_frequency(x: &[f64], fs: f64) -> f64 {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let k = (1..=n / 2)
        .max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))
        .unwrap_or(0);
    k as f64 * fs / n as f64
}

/// `amp * sin(2 pi f t)`, `n` samples.
pub fn tone(f: f64, amp: f64, fs: f64, n: usize) -> SampledSignal {
    let s = (0..n)
        .map(|i| amp * (2.0 * std::f64::consts::PI * f * i as f64 / fs).sin())
        .collect();
    SampledSignal::new(fs, s)
}
