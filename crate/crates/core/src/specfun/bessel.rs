use std::f64::consts::{PI, TAU};

use super::{gamma::log_gamma, is_nonpositive_integer, Complex, SpecFunError};

/// Modulus of `z` above which the large-argument expansion replaces the
/// power series (provided the order is small enough, see `use_asymptotic`).
pub const ASYMPTOTIC_THRESHOLD: f64 = 15.0;

const SERIES_MAX_TERMS: usize = 20_000;
const ASYMPTOTIC_MAX_TERMS: usize = 60;

/// Modified Bessel function `I_ν(z)` of the first kind, principal branch.
pub fn bessel_i(nu: Complex, z: Complex) -> Result<Complex, SpecFunError> {
    if z.re >= 0.0 {
        Ok(bessel_i_scaled(nu, z)? * z.exp())
    } else {
        // I_ν(z e^{±iπ}) = e^{±iπν} I_ν(z)
        let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let rot = (Complex::i() * (sign * PI) * nu).exp();
        Ok(rot * bessel_i_scaled(nu, -z)? * (-z).exp())
    }
}

/// `e^{-z} I_ν(z)` for `Re z ≥ 0`; for `Re z < 0` the same quantity is
/// returned through the reflection formula (and may overflow).
pub fn bessel_i_scaled(nu: Complex, z: Complex) -> Result<Complex, SpecFunError> {
    if z.re < 0.0 {
        return Ok(bessel_i(nu, z)? * (-z).exp());
    }
    if nu.re < 0.0 && is_nonpositive_integer(nu) {
        // I_{-m} = I_m for integer m
        return bessel_i_scaled(-nu, z);
    }
    if z == Complex::new(0.0, 0.0) {
        return if nu == Complex::new(0.0, 0.0) {
            Ok(Complex::new(1.0, 0.0))
        } else if nu.re > 0.0 {
            Ok(Complex::new(0.0, 0.0))
        } else {
            Err(SpecFunError::BesselDomain(nu))
        };
    }
    if use_asymptotic(nu, z) {
        Ok(asymptotic_scaled(nu, z))
    } else {
        series_scaled(nu, z)
    }
}

fn use_asymptotic(nu: Complex, z: Complex) -> bool {
    let r = z.norm();
    r >= ASYMPTOTIC_THRESHOLD && r >= 2.0 * nu.norm_sqr()
}

// Σ_k (z/2)^{2k+ν} / (k! Γ(k+ν+1)), with e^{-z} folded into the first term.
fn series_scaled(nu: Complex, z: Complex) -> Result<Complex, SpecFunError> {
    let half = z * 0.5;
    let lead = nu * half.ln() - log_gamma(nu + 1.0)? - z;
    let mut term = lead.exp();
    let mut sum = term;
    let q = half * half;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64 + 1.0;
        term = term * q / (kf * (nu + kf));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && kf > q.norm().sqrt() {
            break;
        }
    }
    Ok(sum)
}

// e^{-z} I_ν(z) ~ (2πz)^{-1/2} [ Σ (-1)^k a_k / z^k  ±  i e^{-2z ± iπν} Σ a_k / z^k ]
fn asymptotic_scaled(nu: Complex, z: Complex) -> Complex {
    let mu = nu * nu * 4.0;
    let inv = z.inv();
    let mut a_k = Complex::new(1.0, 0.0);
    let mut pow = Complex::new(1.0, 0.0);
    let mut alt = Complex::new(1.0, 0.0);
    let mut plain = Complex::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=ASYMPTOTIC_MAX_TERMS {
        let kf = k as f64;
        a_k = a_k * (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf);
        pow *= inv;
        let term = a_k * pow;
        let size = term.norm();
        if size > last {
            break;
        }
        last = size;
        if k % 2 == 1 {
            alt -= term;
        } else {
            alt += term;
        }
        plain += term;
        if size < 1e-17 {
            break;
        }
    }
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let tail = Complex::i() * sign * (Complex::i() * (sign * PI) * nu - z * 2.0).exp() * plain;
    (alt + tail) / (z * TAU).sqrt()
}
