//! Bilinear generating function of the associated Laguerre polynomials.
//!
//! The library form, weighted by `e^{-(x+y)/2} (xy)^{a/2}` on both sides:
//!
//! ```text
//! t^{-a/2} / (1 - t) · exp[-(x+y)(1+t) / (2(1-t))] · I_a(2 sqrt(xyt) / (1-t))
//!     = Σ_n t^n n! / Γ(n+a+1) · e^{-(x+y)/2} (xy)^{a/2} L_n^a(x) L_n^a(y)
//! ```
//!
//! A second closed form with the prefactor `t e^{-a/2}` in place of
//! `t^{-a/2}` is kept only for [`variant_form_diagnostic`], which measures
//! how far that variant sits from the series.

use serde::Serialize;

use super::{bessel_i_scaled, laguerre_sequence, recip_gamma, Complex, SpecFunError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilleHardyPair {
    pub closed: Complex,
    pub series: Complex,
}

impl HilleHardyPair {
    pub fn residual(&self) -> f64 {
        (self.closed - self.series).norm()
    }
}

/// Closed side and `n_trunc`-term series side of the identity.
pub fn hille_hardy_pair(
    t: Complex,
    x: f64,
    y: f64,
    a: Complex,
    n_trunc: usize,
) -> Result<HilleHardyPair, SpecFunError> {
    check_inputs(t, x, y, n_trunc)?;
    Ok(HilleHardyPair {
        closed: closed_reference(t, x, y, a)?,
        series: series(t, x, y, a, n_trunc)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantFormDiagnostic {
    pub closed_reference: Complex,
    pub closed_variant: Complex,
    pub series: Complex,
    /// `|closed_reference - series|`
    pub reference_residual: f64,
    /// `|closed_variant - series|`
    pub variant_deviation: f64,
}

/// Compares both closed forms against the same truncated series.
pub fn variant_form_diagnostic(
    t: Complex,
    x: f64,
    y: f64,
    a: Complex,
    n_trunc: usize,
) -> Result<VariantFormDiagnostic, SpecFunError> {
    check_inputs(t, x, y, n_trunc)?;
    let closed_reference = closed_reference(t, x, y, a)?;
    let closed_variant = closed_variant(t, x, y, a)?;
    let series = series(t, x, y, a, n_trunc)?;
    Ok(VariantFormDiagnostic {
        closed_reference,
        closed_variant,
        series,
        reference_residual: (closed_reference - series).norm(),
        variant_deviation: (closed_variant - series).norm(),
    })
}

fn check_inputs(t: Complex, x: f64, y: f64, n_trunc: usize) -> Result<(), SpecFunError> {
    if t.norm() >= 1.0 {
        return Err(SpecFunError::Divergence(t.norm()));
    }
    if !(x >= 0.0) {
        return Err(SpecFunError::Domain { name: "x", value: x });
    }
    if !(y >= 0.0) {
        return Err(SpecFunError::Domain { name: "y", value: y });
    }
    if n_trunc == 0 {
        return Err(SpecFunError::Domain { name: "n_trunc", value: 0.0 });
    }
    Ok(())
}

// (xy)^{a/2}, with the conventions 0^0 = 1 and 0^a = 0 for Re a > 0.
fn weight_power(xy: f64, a: Complex) -> Result<Complex, SpecFunError> {
    if xy == 0.0 {
        return if a == Complex::new(0.0, 0.0) {
            Ok(Complex::new(1.0, 0.0))
        } else if a.re > 0.0 {
            Ok(Complex::new(0.0, 0.0))
        } else {
            Err(SpecFunError::BesselDomain(a))
        };
    }
    Ok((a * 0.5 * xy.ln()).exp())
}

// Common factor exp[-(x+y)(1+t)/(2(1-t))] I_a(w) / (1-t), w = 2 sqrt(xyt)/(1-t).
fn closed_core(t: Complex, x: f64, y: f64, a: Complex) -> Result<Complex, SpecFunError> {
    let one = Complex::new(1.0, 0.0);
    let w = (t * (x * y)).sqrt() * 2.0 / (one - t);
    let gauss = -(one + t) / (one - t) * (0.5 * (x + y));
    if w.re >= 0.0 {
        Ok((gauss + w).exp() * bessel_i_scaled(a, w)? / (one - t))
    } else {
        Ok(gauss.exp() * super::bessel_i(a, w)? / (one - t))
    }
}

fn closed_reference(t: Complex, x: f64, y: f64, a: Complex) -> Result<Complex, SpecFunError> {
    if t == Complex::new(0.0, 0.0) {
        // t^{-a/2} I_a(c sqrt t) → (c/2)^a / Γ(a+1): only the n = 0 term survives
        return Ok(weight_power(x * y, a)? * recip_gamma(a + 1.0) * (-(x + y) * 0.5).exp());
    }
    let pref = (-(a * 0.5) * t.ln()).exp();
    Ok(pref * closed_core(t, x, y, a)?)
}

fn closed_variant(t: Complex, x: f64, y: f64, a: Complex) -> Result<Complex, SpecFunError> {
    let pref = t * (-(a * 0.5)).exp();
    Ok(pref * closed_core(t, x, y, a)?)
}

fn series(t: Complex, x: f64, y: f64, a: Complex, n_trunc: usize) -> Result<Complex, SpecFunError> {
    let lx = laguerre_sequence(n_trunc, a, Complex::new(x, 0.0));
    let ly = laguerre_sequence(n_trunc, a, Complex::new(y, 0.0));
    // c_n = t^n n! / Γ(n+a+1)
    let mut coeff = recip_gamma(a + 1.0);
    let mut sum = Complex::new(0.0, 0.0);
    for n in 0..n_trunc {
        if n > 0 {
            let nf = n as f64;
            coeff = coeff * t * nf / (a + nf);
        }
        sum += coeff * lx[n] * ly[n];
    }
    Ok(sum * weight_power(x * y, a)? * (-(x + y) * 0.5).exp())
}
