use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scenario::Medium;

/// Complex pressure factor relative to 1 m: spherical spreading, linear
/// dB/m absorption referenced to 1 m, and phase `-k r`.
pub fn path_factor(r: f64, medium: &Medium, freq: f64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::CoincidentPoint { r });
    }
    let mag = path_magnitude(r, medium.absorption);
    Ok(Complex64::from_polar(mag, -medium.wavenumber(freq) * r))
}

#[inline]
pub(crate) fn path_magnitude(r: f64, absorption: f64) -> f64 {
    if absorption == 0.0 {
        1.0 / r
    } else {
        10f64.powf(-absorption * (r - 1.0) / 20.0) / r
    }
}

/// `20 log10 |path_factor(r)|`.
pub fn path_gain_db(r: f64, medium: &Medium) -> f64 {
    -20.0 * r.log10() - medium.absorption * (r - 1.0)
}
