//! Linear-phase FIR design (Kaiser-windowed sinc) and FFT convolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Modified Bessel function of the first kind, order zero (power series).
pub fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Kaiser beta for a target stopband attenuation in dB.
pub fn kaiser_beta(atten_db: f64) -> f64 {
    if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * (atten_db - 21.0).powf(0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    }
}

pub fn kaiser_window(len: usize, beta: f64) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let m = (len - 1) as f64;
    let denom = bessel_i0(beta);
    (0..len)
        .map(|n| {
            let r = 2.0 * n as f64 / m - 1.0;
            bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom
        })
        .collect()
}

/// Kaiser order estimate (taps - 1) for a transition width in Hz.
pub fn kaiser_order(atten_db: f64, transition_hz: f64, fs: f64) -> usize {
    let dw = 2.0 * PI * transition_hz / fs;
    ((atten_db - 8.0) / (2.285 * dw)).ceil().max(2.0) as usize
}

/// Odd-length low-pass with unit DC gain.
///
/// The 6 dB point sits at `cutoff`; the window is sized for `atten_db`
/// stopband attenuation across `transition_hz`, and never shorter than
/// `min_order + 1` taps.
pub fn design_lowpass(fs: f64, cutoff: f64, transition_hz: f64, atten_db: f64, min_order: usize) -> Vec<f64> {
    let mut order = kaiser_order(atten_db, transition_hz, fs).max(min_order);
    if order % 2 == 1 {
        order += 1;
    }
    let len = order + 1;
    let win = kaiser_window(len, kaiser_beta(atten_db));
    let fc = cutoff / fs;
    let mid = (order / 2) as f64;
    let mut taps: Vec<f64> = (0..len)
        .map(|n| {
            let x = n as f64 - mid;
            let sinc = if x == 0.0 {
                2.0 * fc
            } else {
                (2.0 * PI * fc * x).sin() / (PI * x)
            };
            sinc * win[n]
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= dc;
    }
    taps
}

/// Transition width actually achieved by a Kaiser design of `len` taps.
pub fn achieved_transition(atten_db: f64, len: usize, fs: f64) -> f64 {
    (atten_db - 8.0) / (2.285 * (len - 1) as f64) * fs / (2.0 * PI)
}

/// Low-pass whose stopband starts at `stop_edge`.
///
/// Sized for at least `min_order`; when the window is longer than the
/// `max_transition` bound requires, the transition narrows and the 6 dB
/// point moves up toward the stop edge.
pub fn design_lowpass_to_edge(
    fs: f64,
    stop_edge: f64,
    max_transition: f64,
    atten_db: f64,
    min_order: usize,
) -> Vec<f64> {
    let mut order = kaiser_order(atten_db, max_transition, fs).max(min_order);
    if order % 2 == 1 {
        order += 1;
    }
    let tw = achieved_transition(atten_db, order + 1, fs);
    design_lowpass(fs, stop_edge - tw / 2.0, tw, atten_db, order)
}

/// Magnitude of the frequency response at `f` Hz.
pub fn response(taps: &[f64], f: f64, fs: f64) -> f64 {
    let w = 2.0 * PI * f / fs;
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &h) in taps.iter().enumerate() {
        acc += Complex64::from_polar(h, -w * n as f64);
    }
    acc.norm()
}

/// Full linear convolution via FFT.
pub fn convolve_full(x: &[f64], h: &[f64]) -> Vec<f64> {
    if x.is_empty() || h.is_empty() {
        return Vec::new();
    }
    let out_len = x.len() + h.len() - 1;
    if h.len() <= 32 || x.len() <= 32 {
        let mut y = vec![0.0; out_len];
        for (i, &xv) in x.iter().enumerate() {
            for (j, &hv) in h.iter().enumerate() {
                y[i + j] += xv * hv;
            }
        }
        return y;
    }
    let n = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut a: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    a.resize(n, Complex64::new(0.0, 0.0));
    let mut b: Vec<Complex64> = h.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    b.resize(n, Complex64::new(0.0, 0.0));
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v;
    }
    inv.process(&mut a);
    let scale = 1.0 / n as f64;
    a[..out_len].iter().map(|c| c.re * scale).collect()
}

/// Zero-delay filtering of a linear-phase (odd, symmetric) FIR; output has
/// the input's length, with zero padding beyond the edges.
pub fn filter_same(x: &[f64], taps: &[f64]) -> Vec<f64> {
    let full = convolve_full(x, taps);
    let delay = (taps.len() - 1) / 2;
    full[delay..delay + x.len()].to_vec()
}
