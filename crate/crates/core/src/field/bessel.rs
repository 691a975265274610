//! First-order Bessel function of the first kind.

/// `J1(x)`: power series for small arguments, Hankel asymptotic form beyond.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 12.0 {
        let h = x / 2.0;
        let q = -h * h;
        let mut term = h;
        let mut sum = h;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * (k + 1.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) || k > 60.0 {
                break;
            }
        }
        sum
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - 2.356_194_491;
        let p =
            1.0 + y * (0.183_105e-2 + y * (-0.351_639_649_6e-4 + y * (0.245_752_017_4e-5 + y * (-0.240_337_019e-6))));
        let q = 0.046_874_999_95
            + y * (-0.200_269_087_3e-3 + y * (0.844_919_909_6e-5 + y * (-0.882_289_87e-6 + y * 0.105_787_412e-6)));
        let ans = (std::f64::consts::FRAC_2_PI / ax).sqrt() * (xx.cos() * p - z * xx.sin() * q);
        if x < 0.0 {
            -ans
        } else {
            ans
        }
    }
}

/// `2 J1(x) / x`, equal to 1 at `x = 0`.
pub fn jinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 8.0
    } else {
        2.0 * bessel_j1(x) / x
    }
}
