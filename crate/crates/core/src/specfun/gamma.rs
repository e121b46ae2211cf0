use std::f64::consts::{PI, TAU};

use super::{is_nonpositive_integer, Complex, SpecFunError};

const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// Stirling is accurate to ~1e-17 beyond this modulus with eight terms.
const STIRLING_MIN_MODULUS: f64 = 15.0;

/// Principal-branch `ln Γ(z)`.
///
/// The imaginary part is reduced to `(-π, π]`, so `exp` of the result is
/// `Γ(z)` and `exp(result / 2)` is the principal square root of `Γ(z)`.
pub fn log_gamma(z: Complex) -> Result<Complex, SpecFunError> {
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::Pole(z));
    }
    let lg = log_gamma_continued(z);
    Ok(Complex::new(lg.re, principal_angle(lg.im)))
}

/// `Γ(z)` through the logarithm, so large arguments do not overflow early.
pub fn gamma(z: Complex) -> Result<Complex, SpecFunError> {
    log_gamma(z).map(Complex::exp)
}

/// `1 / Γ(z)`, entire: zero at the poles of `Γ`.
pub fn recip_gamma(z: Complex) -> Complex {
    if is_nonpositive_integer(z) {
        return Complex::new(0.0, 0.0);
    }
    (-log_gamma_continued(z)).exp()
}

fn principal_angle(theta: f64) -> f64 {
    theta - TAU * ((theta - PI) / TAU).ceil()
}

// Analytic continuation of ln Γ off the negative real axis (not reduced).
fn log_gamma_continued(z: Complex) -> Complex {
    if z.re < 0.5 {
        // reflection: Γ(z) Γ(1 - z) = π / sin(π z)
        let one = Complex::new(1.0, 0.0);
        let sin = (z * PI).sin();
        return Complex::new(PI.ln(), 0.0) - sin.ln() - log_gamma_continued(one - z);
    }
    let mut w = z;
    let mut shift = Complex::new(0.0, 0.0);
    while w.norm() < STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(z: Complex) -> Complex {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TAU + series
}
