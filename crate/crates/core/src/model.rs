//! Morse-family potentials and their reduction to a radial oscillator.
//!
//! The generalized Morse potential is `V(x) = V1 e^{-2αx} - V2 e^{-αx}`.
//! The substitution `u² = e^{-αx}` together with the path-dependent time
//! change `dt/ds = 1/u²` turns the problem into a radial oscillator in `u`
//! with mass `M = 4m/α²`, in which the coupling `V2` plays the role of the
//! eigenvalue and the original energy `E` enters only the `1/u²` term.
//!
//! The complexified families replace `e^{-αx}` by `e^{-iαx}`; they keep the
//! real `α` in `M = 4m/α²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::Complex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("unknown variant `{0}` (expected hermitian, pt, non-pt-a or non-pt-b)")]
    UnknownVariant(String),
    #[error("unknown frequency convention `{0}` (expected paper-literal or rederived)")]
    UnknownConvention(String),
    #[error("probe grid is not symmetric about 0: no mirror for x = {0}")]
    AsymmetricProbe(f64),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidField {
        field,
        reason: reason.into(),
    }
}

/// The four Morse families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// `V1 e^{-2αx} - V2 e^{-αx}`, `V1, V2 > 0`.
    #[serde(rename = "hermitian")]
    HermitianGeneralized,
    /// `V1 e^{-2iαx} - V2 e^{-iαx}`, real `V1, V2`.
    #[serde(rename = "pt")]
    PtSymmetric,
    /// `(A+iB)² e^{-2x} - (2C+1)(A+iB) e^{-x}`.
    #[serde(rename = "non-pt-a")]
    NonPtComplexA,
    /// `V1 e^{-2iαx} - (A+iB) e^{-iαx}`, real `V1`.
    #[serde(rename = "non-pt-b")]
    NonPtComplexB,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::HermitianGeneralized,
        Variant::PtSymmetric,
        Variant::NonPtComplexA,
        Variant::NonPtComplexB,
    ];

    /// Whether the exponent carries the imaginary unit (`e^{-iαx}`).
    pub fn complexified_exponent(self) -> bool {
        matches!(self, Variant::PtSymmetric | Variant::NonPtComplexB)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::HermitianGeneralized => "hermitian",
            Variant::PtSymmetric => "pt",
            Variant::NonPtComplexA => "non-pt-a",
            Variant::NonPtComplexB => "non-pt-b",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "hermitian" | "hermitian-generalized" | "generalized" => Ok(Variant::HermitianGeneralized),
            "pt" | "pt-symmetric" => Ok(Variant::PtSymmetric),
            "non-pt-a" | "nonpt-a" | "non-pt-complex-a" => Ok(Variant::NonPtComplexA),
            "non-pt-b" | "nonpt-b" | "non-pt-complex-b" => Ok(Variant::NonPtComplexB),
            _ => Err(ModelError::UnknownVariant(s.to_owned())),
        }
    }
}

/// Which relation between `ω`, `M` and `V1` is used.
///
/// `PaperLiteral` takes `ω² M = ±V1` with `M = 4m/α²`, negative for every
/// family but the hermitian one. `Rederived` takes `½ M ω² = V1`, which is
/// what the transformed action gives term by term; for the `e^{-iαx}`
/// families the substitution flips the kinetic sign, so there
/// `M = -4m/α²` and `ω = i sqrt(2V1/|M|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrequencyConvention {
    PaperLiteral,
    Rederived,
}

impl FrequencyConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            FrequencyConvention::PaperLiteral => "paper-literal",
            FrequencyConvention::Rederived => "rederived",
        }
    }
}

impl fmt::Display for FrequencyConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrequencyConvention {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-literal" | "literal" | "paper" => Ok(FrequencyConvention::PaperLiteral),
            "rederived" => Ok(FrequencyConvention::Rederived),
            _ => Err(ModelError::UnknownConvention(s.to_owned())),
        }
    }
}

/// A validated Morse-family potential.
///
/// Construct through the per-variant constructors or by deserializing; both
/// paths enforce the variant's invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialSpecRepr", into = "PotentialSpecRepr")]
pub struct PotentialSpec {
    variant: Variant,
    v1: Complex,
    v2: Complex,
    alpha: f64,
    mass: f64,
    origin_shift: f64,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
}

impl PotentialSpec {
    pub fn hermitian(v1: f64, v2: f64, alpha: f64, mass: f64) -> Result<Self, ModelError> {
        Self::build(Variant::HermitianGeneralized, re(v1), re(v2), alpha, mass, None, None, None)
    }

    pub fn pt_symmetric(v1: f64, v2: f64, alpha: f64, mass: f64) -> Result<Self, ModelError> {
        Self::build(Variant::PtSymmetric, re(v1), re(v2), alpha, mass, None, None, None)
    }

    /// `V1 = (A+iB)²`, `V2 = (2C+1)(A+iB)`, `α = 1`.
    pub fn non_pt_a(a: f64, b: f64, c: f64, mass: f64) -> Result<Self, ModelError> {
        let z = Complex::new(a, b);
        Self::build(Variant::NonPtComplexA, z * z, z * (2.0 * c + 1.0), 1.0, mass, Some(a), Some(b), Some(c))
    }

    /// Real `V1`, `V2 = A+iB`.
    pub fn non_pt_b(v1: f64, a: f64, b: f64, alpha: f64, mass: f64) -> Result<Self, ModelError> {
        Self::build(Variant::NonPtComplexB, re(v1), Complex::new(a, b), alpha, mass, Some(a), Some(b), None)
    }

    pub fn with_origin_shift(mut self, shift: f64) -> Result<Self, ModelError> {
        if !shift.is_finite() {
            return Err(invalid("origin_shift", "must be finite"));
        }
        self.origin_shift = shift;
        Ok(self)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        variant: Variant,
        v1: Complex,
        v2: Complex,
        alpha: f64,
        mass: f64,
        a: Option<f64>,
        b: Option<f64>,
        c: Option<f64>,
    ) -> Result<Self, ModelError> {
        let spec = PotentialSpec {
            variant,
            v1,
            v2,
            alpha,
            mass,
            origin_shift: 0.0,
            a,
            b,
            c,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid("alpha", format!("must be finite and > 0, got {}", self.alpha)));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(invalid("mass", format!("must be finite and > 0, got {}", self.mass)));
        }
        if !self.origin_shift.is_finite() {
            return Err(invalid("origin_shift", "must be finite"));
        }
        for (field, v) in [("V1", self.v1), ("V2", self.v2)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(invalid(field, "must be finite"));
            }
        }
        match self.variant {
            Variant::HermitianGeneralized => {
                if self.v1.im != 0.0 || self.v2.im != 0.0 {
                    return Err(invalid("V1", "hermitian variant needs real V1 and V2"));
                }
                if self.v1.re <= 0.0 {
                    return Err(invalid("V1", "hermitian variant needs V1 > 0"));
                }
                if self.v2.re <= 0.0 {
                    return Err(invalid("V2", "hermitian variant needs V2 > 0"));
                }
            }
            Variant::PtSymmetric => {
                if self.v1.im != 0.0 {
                    return Err(invalid("V1", "pt variant needs real V1"));
                }
                if self.v2.im != 0.0 {
                    return Err(invalid("V2", "pt variant needs real V2"));
                }
            }
            Variant::NonPtComplexA => {
                let (a, b, c) = match (self.a, self.b, self.c) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => return Err(invalid("A", "non-pt-a variant needs A, B and C")),
                };
                if self.alpha != 1.0 {
                    return Err(invalid("alpha", "non-pt-a variant fixes alpha = 1"));
                }
                let z = Complex::new(a, b);
                if (self.v1 - z * z).norm() > 1e-12 * (1.0 + self.v1.norm()) {
                    return Err(invalid("V1", "must equal (A+iB)^2"));
                }
                if (self.v2 - z * (2.0 * c + 1.0)).norm() > 1e-12 * (1.0 + self.v2.norm()) {
                    return Err(invalid("V2", "must equal (2C+1)(A+iB)"));
                }
            }
            Variant::NonPtComplexB => {
                if self.v1.im != 0.0 {
                    return Err(invalid("V1", "non-pt-b variant needs real V1"));
                }
                if let (Some(a), Some(b)) = (self.a, self.b) {
                    if self.v2 != Complex::new(a, b) {
                        return Err(invalid("V2", "must equal A+iB"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
    pub fn v1(&self) -> Complex {
        self.v1
    }
    pub fn v2(&self) -> Complex {
        self.v2
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn origin_shift(&self) -> f64 {
        self.origin_shift
    }
    pub fn a(&self) -> Option<f64> {
        self.a
    }
    pub fn b(&self) -> Option<f64> {
        self.b
    }
    pub fn c(&self) -> Option<f64> {
        self.c
    }

    /// `e^{-αx}` or `e^{-iαx}`, without the origin shift.
    pub fn exponential(&self, x: f64) -> Complex {
        if self.variant.complexified_exponent() {
            Complex::from_polar(1.0, -self.alpha * x)
        } else {
            Complex::new((-self.alpha * x).exp(), 0.0)
        }
    }

    /// Logarithm of [`Self::exponential`], continued along the real axis
    /// (no wrapping of the phase).
    pub fn log_exponential(&self, x: f64) -> Complex {
        if self.variant.complexified_exponent() {
            Complex::new(0.0, -self.alpha * x)
        } else {
            Complex::new(-self.alpha * x, 0.0)
        }
    }

    /// `(V1, V2)` with the origin shift absorbed:
    /// `V1 e^{2α r0}`, `V2 e^{α r0}` (or the `iα` analogue).
    pub fn effective_couplings(&self) -> (Complex, Complex) {
        if self.origin_shift == 0.0 {
            return (self.v1, self.v2);
        }
        let e = self.exponential(-self.origin_shift);
        (self.v1 * e * e, self.v2 * e)
    }

    /// `V(x)` with `x → x - origin_shift`.
    pub fn evaluate(&self, x: f64) -> Complex {
        let e = self.exponential(x - self.origin_shift);
        self.v1 * e * e - self.v2 * e
    }

    /// Bottom of the well `-V2²/(4V1)` (complex for the complex families).
    pub fn well_minimum(&self) -> Complex {
        let (v1, v2) = self.effective_couplings();
        -(v2 * v2) / (v1 * 4.0)
    }

    /// `λ = (V2/α) sqrt(m / (2 V1))`; the bound-state count is `⌈λ - ½⌉`.
    pub fn lambda(&self) -> Complex {
        let (v1, v2) = self.effective_couplings();
        v2 / self.alpha * (Complex::new(self.mass, 0.0) / (v1 * 2.0)).sqrt()
    }
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `V(x)` for the given spec.
pub fn evaluate_potential(spec: &PotentialSpec, x: f64) -> Complex {
    spec.evaluate(x)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PotentialSpecRepr {
    variant: String,
    #[serde(rename = "V1", default, skip_serializing_if = "Option::is_none")]
    v1: Option<[f64; 2]>,
    #[serde(rename = "V2", default, skip_serializing_if = "Option::is_none")]
    v2: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    mass: f64,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default)]
    origin_shift: f64,
}

fn pair(v: Complex) -> [f64; 2] {
    [v.re, v.im]
}

fn unpair(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

impl From<PotentialSpec> for PotentialSpecRepr {
    fn from(s: PotentialSpec) -> Self {
        PotentialSpecRepr {
            variant: s.variant.as_str().to_owned(),
            v1: Some(pair(s.v1)),
            v2: Some(pair(s.v2)),
            alpha: Some(s.alpha),
            mass: s.mass,
            a: s.a,
            b: s.b,
            c: s.c,
            origin_shift: s.origin_shift,
        }
    }
}

impl TryFrom<PotentialSpecRepr> for PotentialSpec {
    type Error = ModelError;

    fn try_from(r: PotentialSpecRepr) -> Result<Self, Self::Error> {
        let variant: Variant = r.variant.parse()?;
        let need = |v: Option<f64>, field: &'static str| v.ok_or_else(|| invalid(field, "is required for this variant"));
        let spec = match variant {
            Variant::HermitianGeneralized | Variant::PtSymmetric => PotentialSpec {
                variant,
                v1: unpair(r.v1.ok_or_else(|| invalid("V1", "is required"))?),
                v2: unpair(r.v2.ok_or_else(|| invalid("V2", "is required"))?),
                alpha: need(r.alpha, "alpha")?,
                mass: r.mass,
                origin_shift: r.origin_shift,
                a: None,
                b: None,
                c: None,
            },
            Variant::NonPtComplexA => {
                let (a, b, c) = (need(r.a, "A")?, need(r.b, "B")?, need(r.c, "C")?);
                if let Some(alpha) = r.alpha {
                    if alpha != 1.0 {
                        return Err(invalid("alpha", "non-pt-a variant fixes alpha = 1"));
                    }
                }
                let z = Complex::new(a, b);
                PotentialSpec {
                    variant,
                    v1: r.v1.map(unpair).unwrap_or(z * z),
                    v2: r.v2.map(unpair).unwrap_or(z * (2.0 * c + 1.0)),
                    alpha: 1.0,
                    mass: r.mass,
                    origin_shift: r.origin_shift,
                    a: Some(a),
                    b: Some(b),
                    c: Some(c),
                }
            }
            Variant::NonPtComplexB => {
                let v2 = match (r.v2, r.a, r.b) {
                    (_, Some(a), Some(b)) => Complex::new(a, b),
                    (Some(v2), _, _) => unpair(v2),
                    _ => return Err(invalid("V2", "give V2 or both A and B")),
                };
                PotentialSpec {
                    variant,
                    v1: unpair(r.v1.ok_or_else(|| invalid("V1", "is required"))?),
                    v2,
                    alpha: need(r.alpha, "alpha")?,
                    mass: r.mass,
                    origin_shift: r.origin_shift,
                    a: Some(v2.re),
                    b: Some(v2.im),
                    c: None,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Result of the PT-symmetry test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtVerdict {
    pub is_pt: bool,
    pub max_deviation: f64,
}

/// Relative threshold for declaring `V(-x) = conj V(x)`.
pub const PT_TOLERANCE: f64 = 1e-12;

/// `max |V(-x) - conj V(x)|` over a probe symmetric about the origin.
pub fn check_pt_symmetry(spec: &PotentialSpec, probe: &[f64]) -> Result<PtVerdict, ModelError> {
    let mut sorted: Vec<f64> = probe.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &x in probe {
        let mirror = -x;
        let found = sorted
            .binary_search_by(|p| p.total_cmp(&mirror))
            .is_ok()
            || sorted.iter().any(|&p| (p - mirror).abs() <= 1e-12 * (1.0 + x.abs()));
        if !found {
            return Err(ModelError::AsymmetricProbe(x));
        }
    }
    let mut max_dev = 0.0f64;
    let mut max_v = 0.0f64;
    for &x in probe {
        let v = spec.evaluate(x);
        let dev = (spec.evaluate(-x) - v.conj()).norm();
        max_dev = max_dev.max(dev);
        max_v = max_v.max(v.norm());
    }
    Ok(PtVerdict {
        is_pt: max_dev < PT_TOLERANCE * (1.0 + max_v),
        max_deviation: max_dev,
    })
}

/// `n` points evenly spread over `[-half_width, half_width]`.
pub fn symmetric_probe(half_width: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let at = |i: usize| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
    // lower half mirrors the upper half bit for bit
    (0..n)
        .map(|i| {
            if 2 * i + 1 == n {
                0.0
            } else if i >= n / 2 {
                at(i)
            } else {
                -at(n - 1 - i)
            }
        })
        .collect()
}

/// Radial oscillator `p²/2M + ½Mω²u² + c/u²` at a fixed value of the
/// original energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialOscillator {
    pub mass: Complex,
    pub omega: Complex,
    pub centrifugal_coeff: Complex,
}

impl RadialOscillator {
    /// The oscillator whose centrifugal term is `(ν² - ¼)/(2M u²)`.
    pub fn from_bessel_order(mass: Complex, omega: Complex, nu: Complex) -> Self {
        RadialOscillator {
            mass,
            omega,
            centrifugal_coeff: (nu * nu - 0.25) / (mass * 2.0),
        }
    }

    /// `ν = sqrt(2Mc + ¼)`, the Bessel order of the propagator.
    pub fn bessel_order(&self) -> Complex {
        (self.mass * self.centrifugal_coeff * 2.0 + 0.25).sqrt()
    }

    /// `ε_n = ω (2n + 1 + ν)`.
    pub fn level(&self, n: usize) -> Complex {
        self.omega * (2.0 * n as f64 + 1.0 + self.bessel_order())
    }

    /// Harmonic part `½ M ω² u²`.
    pub fn harmonic(&self, u: f64) -> Complex {
        self.mass * self.omega * self.omega * (0.5 * u * u)
    }
}

/// The reduced problem produced by the Duru–Kleinert transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveOscillator {
    pub variant: Variant,
    pub mass: Complex,
    pub omega: Complex,
    /// The coupling that acts as the eigenvalue of the reduced problem.
    pub pseudo_energy: Complex,
    pub frequency_convention: FrequencyConvention,
}

impl EffectiveOscillator {
    /// Coefficient of `1/u²` for a given original energy `E`.
    ///
    /// With the literal convention on the hermitian family this is
    /// `(2ME - ¼)/(2M)`; otherwise `(-2ME - ¼)/(2M)`, which is the form
    /// `((sqrt(-2ME))² - ¼)/(2M)` on the principal branch.
    pub fn centrifugal_coeff(&self, energy: Complex) -> Complex {
        let two_m_e = self.mass * energy * 2.0;
        let lead = if self.literal_hermitian() { two_m_e } else { -two_m_e };
        (lead - 0.25) / (self.mass * 2.0)
    }

    /// The same coefficient with the `-¼` from the Jacobian symmetrization
    /// dropped. Only useful as a negative control.
    pub fn centrifugal_coeff_unsymmetrized(&self, energy: Complex) -> Complex {
        self.centrifugal_coeff(energy) + 0.25 / (self.mass * 2.0)
    }

    fn literal_hermitian(&self) -> bool {
        self.frequency_convention == FrequencyConvention::PaperLiteral
            && self.variant == Variant::HermitianGeneralized
    }

    /// Bessel order `sqrt(2Mc + ¼)` at energy `E`.
    pub fn bessel_order(&self, energy: Complex) -> Complex {
        self.at_energy(energy).bessel_order()
    }

    pub fn at_energy(&self, energy: Complex) -> RadialOscillator {
        RadialOscillator {
            mass: self.mass,
            omega: self.omega,
            centrifugal_coeff: self.centrifugal_coeff(energy),
        }
    }

    pub fn at_energy_unsymmetrized(&self, energy: Complex) -> RadialOscillator {
        RadialOscillator {
            mass: self.mass,
            omega: self.omega,
            centrifugal_coeff: self.centrifugal_coeff_unsymmetrized(energy),
        }
    }

    /// `V2/ω`, the quantity every level bound is built from.
    pub fn coupling_ratio(&self) -> Complex {
        self.pseudo_energy / self.omega
    }
}

/// Sign of `ω² M` relative to `V1` under the literal convention.
fn literal_sign(variant: Variant) -> f64 {
    match variant {
        Variant::HermitianGeneralized => 1.0,
        _ => -1.0,
    }
}

/// Reduces a potential to its effective radial oscillator.
pub fn to_effective_oscillator(spec: &PotentialSpec, convention: FrequencyConvention) -> EffectiveOscillator {
    let (v1, v2) = spec.effective_couplings();
    let m_eff = 4.0 * spec.mass() / (spec.alpha() * spec.alpha());
    let (mass, omega) = match convention {
        FrequencyConvention::PaperLiteral => {
            let sign = literal_sign(spec.variant());
            (Complex::new(m_eff, 0.0), (v1 * (sign / m_eff)).sqrt())
        }
        // d²/dx² picks up (−iα)², i.e. the real problem with m → −m
        FrequencyConvention::Rederived if spec.variant().complexified_exponent() => {
            (Complex::new(-m_eff, 0.0), Complex::i() * (v1 * (2.0 / m_eff)).sqrt())
        }
        FrequencyConvention::Rederived => (Complex::new(m_eff, 0.0), (v1 * (2.0 / m_eff)).sqrt()),
    };
    EffectiveOscillator {
        variant: spec.variant(),
        mass,
        omega,
        pseudo_energy: v2,
        frequency_convention: convention,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lambda3() -> PotentialSpec {
        PotentialSpec::hermitian(1.0, 6.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn potential_examples() {
        let h = PotentialSpec::hermitian(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(h.evaluate(0.0), Complex::new(0.0, 0.0));
        let p = PotentialSpec::pt_symmetric(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.evaluate(0.0), Complex::new(0.0, 0.0));
        let a = PotentialSpec::non_pt_a(1.0, 1.0, 0.0, 0.5).unwrap();
        let v = a.evaluate(0.0);
        assert_relative_eq!(v.re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hermitian_potential_is_real() {
        let h = lambda3();
        for i in -50..=50 {
            assert_eq!(h.evaluate(i as f64 * 0.37).im, 0.0);
        }
    }

    #[test]
    fn origin_shift_is_absorbed_exactly() {
        for spec in [
            lambda3(),
            PotentialSpec::pt_symmetric(1.3, 2.0, 0.7, 1.0).unwrap(),
        ] {
            let shifted = spec.clone().with_origin_shift(0.8).unwrap();
            let (v1, v2) = shifted.effective_couplings();
            for x in [-1.0, 0.0, 0.5, 3.0] {
                let e = spec.exponential(x);
                let absorbed = v1 * e * e - v2 * e;
                assert!((absorbed - shifted.evaluate(x)).norm() < 1e-12 * absorbed.norm().max(1.0));
                assert!((shifted.evaluate(x + 0.8) - spec.evaluate(x)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pt_examples() {
        let probe = symmetric_probe(5.0, 101);
        let pt = PotentialSpec::pt_symmetric(1.0, 1.0, 1.0, 1.0).unwrap();
        let v = check_pt_symmetry(&pt, &probe).unwrap();
        assert!(v.is_pt);
        assert!(v.max_deviation < 1e-14);
        let h = PotentialSpec::hermitian(1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(!check_pt_symmetry(&h, &probe).unwrap().is_pt);
        let a = PotentialSpec::non_pt_a(1.0, 1.0, 0.0, 0.5).unwrap();
        assert!(!check_pt_symmetry(&a, &probe).unwrap().is_pt);
    }

    #[test]
    fn asymmetric_probe_rejected() {
        let pt = PotentialSpec::pt_symmetric(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            check_pt_symmetry(&pt, &[-1.0, 0.0, 2.0]),
            Err(ModelError::AsymmetricProbe(_))
        ));
    }

    #[test]
    fn symmetric_probe_has_exact_mirrors() {
        for n in [2, 7, 100, 101] {
            let p = symmetric_probe(3.3, n);
            for &x in &p {
                assert!(p.contains(&-x), "n={n} missing mirror of {x}");
            }
        }
    }

    #[test]
    fn effective_oscillator_examples() {
        let s = PotentialSpec::hermitian(4.0, 1.0, 2.0, 1.0).unwrap();
        let e = to_effective_oscillator(&s, FrequencyConvention::PaperLiteral);
        assert_relative_eq!(e.mass.re, 1.0);
        assert_relative_eq!(e.omega.re, 2.0);

        let s = PotentialSpec::hermitian(1.0, 6.0, 1.0, 0.5).unwrap();
        let lit = to_effective_oscillator(&s, FrequencyConvention::PaperLiteral);
        assert_relative_eq!(lit.mass.re, 2.0);
        assert_relative_eq!(lit.omega.re, 0.5f64.sqrt(), epsilon = 1e-15);
        let red = to_effective_oscillator(&s, FrequencyConvention::Rederived);
        assert_relative_eq!(red.omega.re, 1.0, epsilon = 1e-15);
        assert_eq!(red.pseudo_energy, Complex::new(6.0, 0.0));
    }

    #[test]
    fn frequency_relations_per_variant() {
        let specs = [
            lambda3(),
            PotentialSpec::pt_symmetric(1.5, 2.0, 0.8, 0.7).unwrap(),
            PotentialSpec::non_pt_a(1.2, 0.4, 1.0, 0.5).unwrap(),
            PotentialSpec::non_pt_b(2.0, 1.0, 0.5, 1.3, 0.9).unwrap(),
        ];
        for s in &specs {
            let m = 4.0 * s.mass() / (s.alpha() * s.alpha());

            let lit = to_effective_oscillator(s, FrequencyConvention::PaperLiteral);
            let rhs = s.v1() * literal_sign(s.variant());
            assert!((lit.omega * lit.omega * lit.mass - rhs).norm() < 1e-12 * rhs.norm(), "{:?}", s.variant());
            assert_eq!(lit.mass, Complex::new(m, 0.0));

            let red = to_effective_oscillator(s, FrequencyConvention::Rederived);
            let half = red.omega * red.omega * red.mass * 0.5;
            assert!((half - s.v1()).norm() < 1e-12 * s.v1().norm(), "{:?}", s.variant());
            let sign = if s.variant().complexified_exponent() { -1.0 } else { 1.0 };
            assert_eq!(red.mass, Complex::new(sign * m, 0.0));
        }
    }

    #[test]
    fn complexified_branch_is_fixed() {
        // +i regardless of the sign of a zero imaginary part
        let p = PotentialSpec::pt_symmetric(1.0, 2.0, 1.0, 0.5).unwrap();
        let e = to_effective_oscillator(&p, FrequencyConvention::Rederived);
        assert_eq!(e.omega, Complex::new(0.0, 1.0));
        assert_eq!(e.mass, Complex::new(-2.0, 0.0));
    }

    #[test]
    fn centrifugal_forms() {
        let s = lambda3();
        let lit = to_effective_oscillator(&s, FrequencyConvention::PaperLiteral);
        let red = to_effective_oscillator(&s, FrequencyConvention::Rederived);
        let e = Complex::new(-6.25, 0.0);
        // (2ME - 1/4)/(2M) with M = 2
        assert_relative_eq!(lit.centrifugal_coeff(e).re, (2.0 * 2.0 * -6.25 - 0.25) / 4.0);
        assert_relative_eq!(red.centrifugal_coeff(e).re, (25.0 - 0.25) / 4.0);
        assert_relative_eq!(red.bessel_order(e).re, 5.0, epsilon = 1e-14);
        let shift = red.centrifugal_coeff_unsymmetrized(e) - red.centrifugal_coeff(e);
        assert_relative_eq!(shift.re, 0.25 / 4.0);
    }

    #[test]
    fn json_round_trip_and_schema() {
        let s = PotentialSpec::non_pt_a(1.0, 0.5, 2.0, 0.5).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["variant"], "non-pt-a");
        assert_eq!(json["V1"][1], 1.0);
        let back: PotentialSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);

        let b: PotentialSpec = serde_json::from_str(
            r#"{"variant":"non-pt-b","V1":[2,0],"A":1,"B":0.5,"alpha":1,"mass":0.5}"#,
        )
        .unwrap();
        assert_eq!(b.v2(), Complex::new(1.0, 0.5));

        let h: PotentialSpec = serde_json::from_str(
            r#"{"variant":"hermitian","V1":[1,0],"V2":[6,0],"alpha":1,"mass":0.5,"origin_shift":0}"#,
        )
        .unwrap();
        assert_eq!(h, lambda3());
    }

    #[test]
    fn validation_names_the_field() {
        let err = PotentialSpec::hermitian(-1.0, 6.0, 1.0, 0.5).unwrap_err();
        assert!(err.to_string().contains("V1"), "{err}");
        let err = PotentialSpec::hermitian(1.0, 6.0, 0.0, 0.5).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
        let err = serde_json::from_str::<PotentialSpec>(
            r#"{"variant":"morse","V1":[1,0],"V2":[6,0],"alpha":1,"mass":0.5}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("morse"), "{err}");
        let err = serde_json::from_str::<PotentialSpec>(
            r#"{"variant":"pt","V1":[1,0.5],"V2":[6,0],"alpha":1,"mass":0.5}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("V1"), "{err}");
    }

    #[test]
    fn lambda_and_minimum() {
        let s = lambda3();
        assert_relative_eq!(s.lambda().re, 3.0, epsilon = 1e-14);
        assert_relative_eq!(s.well_minimum().re, -9.0, epsilon = 1e-14);
    }
}
