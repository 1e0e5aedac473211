//! Principal branch of the complex log-Gamma function.

use core::f64::consts::PI;

use num_complex::Complex64;

/// `ln(2 pi) / 2`.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2m} / (2m (2m - 1))` for `m = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus the argument is pushed up by the recurrence first.
const STIRLING_RADIUS: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GammaError {
    #[error("log-Gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
}

/// `ln Gamma(z)` on the principal branch (continuous off the negative real
/// axis, real on the positive real axis).
pub fn log_gamma(z: Complex64) -> Result<Complex64, GammaError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == libm::floor(z.re) {
        return Err(GammaError::Pole { re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Ok(Complex64::new(f64::NAN, f64::NAN));
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    // reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z) + 2 pi i m
    let refl = Complex64::new(libm::log(PI), 0.0) - log_sin_pi(z) - log_gamma_right(Complex64::new(1.0, 0.0) - z);
    // the integer m is fixed by the imaginary part obtained from the recurrence
    let steps = libm::ceil(0.5 - z.re) as usize;
    let mut im = log_gamma_right(z + steps as f64).im;
    for k in 0..steps {
        im -= (z + k as f64).arg();
    }
    let m = libm::round((im - refl.im) / (2.0 * PI));
    Ok(Complex64::new(refl.re, refl.im + 2.0 * PI * m))
}

/// `ln Gamma(z)` for `Re z >= 1/2`.
fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// `ln sin(pi z)` modulo `2 pi i`, without overflow for large `|Im z|`.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let ipz = i * PI * z;
    if z.im > 1.0 {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i)
        -ipz + (Complex64::new(1.0, 0.0) - (ipz * 2.0).exp()).ln() - (i * 2.0 * -1.0).ln()
    } else if z.im < -1.0 {
        // sin(pi z) = e^{i pi z} (1 - e^{-2 i pi z}) / (2i)
        ipz + (Complex64::new(1.0, 0.0) - (-ipz * 2.0).exp()).ln() - (i * 2.0).ln()
    } else {
        (z * PI).sin().ln()
    }
}

/// `ln(1 / (Gamma(z) Gamma(-z))) = ln(-z sin(pi z) / pi)`, an entire function of
/// `z`. Returns real part `-inf` on its zeros.
pub fn log_recip_gamma_pair(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    (-z).ln() + log_sin_pi(z) - libm::log(PI)
}

/// `ln(1 / (Gamma(1 + z) Gamma(1 - z))) = ln(sin(pi z) / (pi z))`, equal to 0 at
/// `z = 0`.
pub fn log_recip_gamma_pair_shifted(z: Complex64) -> Complex64 {
    let pz = z * PI;
    if pz.norm() < 1e-4 {
        // sin(w)/w = 1 - w^2/6 + w^4/120 - ...
        let w2 = pz * pz;
        return (Complex64::new(1.0, 0.0) - w2 / 6.0 + w2 * w2 / 120.0).ln();
    }
    log_sin_pi(z) - pz.ln()
}

/// `Gamma(z)` through [`log_gamma`].
pub fn gamma(z: Complex64) -> Result<Complex64, GammaError> {
    Ok(log_gamma(z)?.exp())
}
