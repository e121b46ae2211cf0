//! Complex special functions: log-gamma, associated Laguerre polynomials,
//! modified Bessel functions of the first kind and the Hille–Hardy
//! bilinear generating function.
//!
//! Every multivalued function here (logarithm, square root, complex power)
//! uses the principal branch. Callers that need a continuation along a path
//! build it from the logarithm themselves.

mod bessel;
mod gamma;
mod hille_hardy;
mod laguerre;

pub use bessel::{bessel_i, bessel_i_scaled, ASYMPTOTIC_THRESHOLD};
pub use gamma::{gamma, log_gamma, recip_gamma};
pub use hille_hardy::{
    hille_hardy_pair, variant_form_diagnostic, HilleHardyPair, VariantFormDiagnostic,
};
pub use laguerre::{laguerre, laguerre_sequence};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma function pole at z = {0}")]
    Pole(Complex),
    #[error("I_nu(0) is undefined for nu = {0} (Re nu < 0 or purely imaginary)")]
    BesselDomain(Complex),
    #[error("generating function diverges for |t| = {0} >= 1")]
    Divergence(f64),
    #[error("argument {name} = {value} is outside the domain")]
    Domain { name: &'static str, value: f64 },
}

/// Builds a complex scalar, rejecting NaN components in debug builds.
#[inline]
pub fn complex(re: f64, im: f64) -> Complex {
    debug_assert!(!re.is_nan() && !im.is_nan(), "NaN complex scalar");
    Complex::new(re, im)
}

#[inline]
pub(crate) fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}
