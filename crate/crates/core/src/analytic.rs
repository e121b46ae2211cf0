//! Closed-form spectra and wavefunctions.
//!
//! Two backends:
//!
//! * `PaperLiteral` takes the level formula
//!   `E_n = -V2 [1 ∓ (2ω/V2)(n + ½)]²` (minus sign for the hermitian family,
//!   plus for the complexified ones), its normalized wavefunction and its
//!   level-count inequality at face value.
//! * `PoleCondition` reads levels off the Green's function pole
//!   `ω(2n + 1 + ν) = V2` with `ν = sqrt(-2ME)`, i.e.
//!   `E_n = -(V2/ω - 2n - 1)² / (2M)`, keeping only levels with `Re ν > 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::{to_effective_oscillator, EffectiveOscillator, FrequencyConvention, PotentialSpec, Variant};
use crate::oracle::Grid;
use crate::specfun::{laguerre, log_gamma, Complex, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("level n = {n} exceeds n_max = {n_max}")]
    LevelOutOfRange { n: usize, n_max: i64 },
    #[error("u must be > 0 in u-space, got {0}")]
    NonPositiveU(f64),
    #[error("wavefunction cannot be normalized on the grid (norm² = {0})")]
    Normalization(f64),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("unknown backend `{0}` (expected paper-literal or pole)")]
    UnknownBackend(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    PaperLiteral,
    PoleCondition,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::PaperLiteral, Backend::PoleCondition];

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::PaperLiteral => "paper-literal",
            Backend::PoleCondition => "pole-condition",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = AnalyticError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-literal" | "paper" | "literal" => Ok(Backend::PaperLiteral),
            "pole-condition" | "pole" => Ok(Backend::PoleCondition),
            _ => Err(AnalyticError::UnknownBackend(s.to_string())),
        }
    }
}

/// Which variable a wavefunction is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// `u > 0` with `u² = e^{-αx}`.
    UVariable,
    XVariable,
}

/// Level bound: `n_max` is the largest integer strictly below
/// `Re(bound_condition_value)`, so `-1` means no levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelCount {
    pub n_max: i64,
    pub bound_condition_value: Complex,
}

impl LevelCount {
    fn from_bound(value: Complex) -> Self {
        let n_max = if value.re.is_finite() {
            (value.re.ceil() as i64 - 1).max(-1)
        } else {
            -1
        };
        LevelCount {
            n_max,
            bound_condition_value: value,
        }
    }

    pub fn len(&self) -> usize {
        (self.n_max + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n_max < 0
    }
}

fn literal_minus(variant: Variant) -> bool {
    variant == Variant::HermitianGeneralized
}

/// `n_max` and the bound quantity for a backend.
///
/// Paper-literal: `V2/ω - ½` (hermitian) or `V2/ω + ½` (complexified).
/// Pole condition: `V2/(2ω) - ½`, the `Re ν_n > 0` cap.
pub fn level_count(spec: &PotentialSpec, backend: Backend, convention: FrequencyConvention) -> LevelCount {
    level_count_for(&to_effective_oscillator(spec, convention), backend)
}

fn level_count_for(osc: &EffectiveOscillator, backend: Backend) -> LevelCount {
    let ratio = osc.coupling_ratio();
    let bound = match backend {
        Backend::PaperLiteral if literal_minus(osc.variant) => ratio - 0.5,
        Backend::PaperLiteral => ratio + 0.5,
        Backend::PoleCondition => ratio * 0.5 - 0.5,
    };
    LevelCount::from_bound(bound)
}

/// Literal level formula, with no range check.
pub fn paper_literal_energy(osc: &EffectiveOscillator, n: usize) -> Complex {
    let v2 = osc.pseudo_energy;
    let step = osc.omega * 2.0 / v2 * (n as f64 + 0.5);
    let inner = if literal_minus(osc.variant) { 1.0 - step } else { 1.0 + step };
    -v2 * inner * inner
}

/// `ν_n = V2/ω - (2n + 1)`, the Bessel order at the `n`-th pole.
pub fn pole_order(osc: &EffectiveOscillator, n: usize) -> Complex {
    osc.coupling_ratio() - (2.0 * n as f64 + 1.0)
}

/// `-ν_n² / (2M)`, with no range check.
pub fn pole_energy(osc: &EffectiveOscillator, n: usize) -> Complex {
    let nu = pole_order(osc, n);
    -(nu * nu) / (osc.mass * 2.0)
}

fn energy_for(osc: &EffectiveOscillator, n: usize, backend: Backend) -> Result<Complex, AnalyticError> {
    let count = level_count_for(osc, backend);
    if n as i64 > count.n_max {
        return Err(AnalyticError::LevelOutOfRange { n, n_max: count.n_max });
    }
    Ok(match backend {
        Backend::PaperLiteral => paper_literal_energy(osc, n),
        Backend::PoleCondition => pole_energy(osc, n),
    })
}

pub fn energy(spec: &PotentialSpec, n: usize, backend: Backend, convention: FrequencyConvention) -> Result<Complex, AnalyticError> {
    energy_for(&to_effective_oscillator(spec, convention), n, backend)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

impl Level {
    pub fn energy(&self) -> Complex {
        Complex::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub variant: Variant,
    pub backend: Backend,
    pub convention: FrequencyConvention,
    pub levels: Vec<Level>,
    pub n_max: i64,
    pub bound_condition_value: Complex,
}

/// One CSV row of a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub variant: Variant,
    pub backend: Backend,
    pub convention: FrequencyConvention,
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<Complex> {
        self.levels.iter().map(Level::energy).collect()
    }

    pub fn rows(&self) -> Vec<SpectrumRow> {
        self.levels
            .iter()
            .map(|l| SpectrumRow {
                variant: self.variant,
                backend: self.backend,
                convention: self.convention,
                n: l.n,
                re: l.re,
                im: l.im,
            })
            .collect()
    }
}

pub fn spectrum(spec: &PotentialSpec, backend: Backend, convention: FrequencyConvention) -> SpectrumResult {
    let osc = to_effective_oscillator(spec, convention);
    let count = level_count_for(&osc, backend);
    let levels = (0..count.len())
        .map(|n| {
            let e = energy_for(&osc, n, backend).expect("n within n_max");
            Level { n, re: e.re, im: e.im }
        })
        .collect();
    SpectrumResult {
        variant: spec.variant(),
        backend,
        convention,
        levels,
        n_max: count.n_max,
        bound_condition_value: count.bound_condition_value,
    }
}

/// Parameters of a closed-form eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveFunctionSpec {
    pub n: usize,
    pub s_param: Complex,
    /// Laguerre order, `2s + ½`.
    pub order: Complex,
    pub norm_const: Complex,
    pub space: Space,
    pub backend: Backend,
}

/// A closed-form eigenfunction ready for repeated evaluation.
///
/// Pole condition: `N z^{ν/2} e^{-z/2} L_n^ν(z)`, `N` fixed by trapezoid
/// quadrature of `|ψ(x)|²` on the default oracle grid.
/// Paper-literal: `N z^{s+½} e^{-z} L_n^{2s+½}(z)` with
/// `s = ¼ + ½ sqrt(-2mE)` and its closed-form constant.
/// In both, `z = Mω u²` and `ln z` is continued along `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    spec: WaveFunctionSpec,
    energy: Complex,
    log_m_omega: Complex,
    m_omega: Complex,
    power: Complex,
    damping: f64,
    variant_spec: PotentialSpec,
}

impl WaveFunction {
    pub fn new(
        spec: &PotentialSpec,
        n: usize,
        backend: Backend,
        convention: FrequencyConvention,
    ) -> Result<Self, AnalyticError> {
        let osc = to_effective_oscillator(spec, convention);
        let energy = energy_for(&osc, n, backend)?;
        let m_omega = osc.mass * osc.omega;
        let mut wf = match backend {
            Backend::PoleCondition => {
                let nu = pole_order(&osc, n);
                WaveFunction {
                    spec: WaveFunctionSpec {
                        n,
                        s_param: (nu - 0.5) * 0.5,
                        order: nu,
                        norm_const: Complex::new(1.0, 0.0),
                        space: Space::XVariable,
                        backend,
                    },
                    energy,
                    log_m_omega: m_omega.ln(),
                    m_omega,
                    power: nu * 0.5,
                    damping: 0.5,
                    variant_spec: spec.clone(),
                }
            }
            Backend::PaperLiteral => {
                let s = (energy * (-2.0 * spec.mass())).sqrt() * 0.5 + 0.25;
                let order = s * 2.0 + 0.5;
                let log_norm = ((s - 0.25) * m_omega * (2.0 * spec.alpha())).ln()
                    + log_gamma(Complex::new(n as f64 + 1.0, 0.0))?
                    - log_gamma(order + n as f64)?;
                WaveFunction {
                    spec: WaveFunctionSpec {
                        n,
                        s_param: s,
                        order,
                        norm_const: (log_norm * 0.5).exp(),
                        space: Space::XVariable,
                        backend,
                    },
                    energy,
                    log_m_omega: m_omega.ln(),
                    m_omega,
                    power: s + 0.5,
                    damping: 1.0,
                    variant_spec: spec.clone(),
                }
            }
        };
        if backend == Backend::PoleCondition {
            let grid = Grid::default_for(spec);
            let weights = grid.trapezoid_weights();
            let norm2: f64 = grid
                .points()
                .iter()
                .zip(&weights)
                .map(|(&x, w)| w * wf.raw_x(x).norm_sqr())
                .sum();
            if !(norm2.is_finite() && norm2 > 0.0) {
                return Err(AnalyticError::Normalization(norm2));
            }
            wf.spec.norm_const = Complex::new(norm2.sqrt().recip(), 0.0);
        }
        Ok(wf)
    }

    pub fn spec(&self) -> WaveFunctionSpec {
        self.spec
    }

    pub fn energy(&self) -> Complex {
        self.energy
    }

    fn raw_from_log_u2(&self, log_u2: Complex, u2: Complex) -> Complex {
        let log_z = self.log_m_omega + log_u2;
        let z = self.m_omega * u2;
        let envelope = (self.power * log_z - z * self.damping).exp();
        envelope * laguerre(self.spec.n, self.spec.order, z)
    }

    fn raw_x(&self, x: f64) -> Complex {
        let s = &self.variant_spec;
        self.raw_from_log_u2(s.log_exponential(x), s.exponential(x))
    }

    /// Amplitude at `x`, with `u² = e^{-αx}` (or `e^{-iαx}`).
    pub fn eval_x(&self, x: f64) -> Complex {
        self.spec.norm_const * self.raw_x(x)
    }

    /// Amplitude at `u > 0`.
    pub fn eval_u(&self, u: f64) -> Result<Complex, AnalyticError> {
        if !(u > 0.0) {
            return Err(AnalyticError::NonPositiveU(u));
        }
        let u2 = u * u;
        Ok(self.spec.norm_const * self.raw_from_log_u2(Complex::new(u2.ln(), 0.0), Complex::new(u2, 0.0)))
    }

    pub fn eval(&self, point: f64, space: Space) -> Result<Complex, AnalyticError> {
        match space {
            Space::XVariable => Ok(self.eval_x(point)),
            Space::UVariable => self.eval_u(point),
        }
    }
}

/// Single-point convenience wrapper; prefer [`WaveFunction`] for sweeps.
pub fn wavefunction(
    spec: &PotentialSpec,
    n: usize,
    backend: Backend,
    convention: FrequencyConvention,
    point: f64,
    space: Space,
) -> Result<Complex, AnalyticError> {
    WaveFunction::new(spec, n, backend, convention)?.eval(point, space)
}

/// `max_n |Im E_n|` threshold for calling a spectrum real.
pub const REALNESS_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealnessRecord {
    pub spec: PotentialSpec,
    pub n_max: i64,
    pub energies: Vec<Complex>,
    /// `None` when the spectrum is empty.
    pub max_abs_im: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealnessLedger {
    pub backend: Backend,
    pub convention: FrequencyConvention,
    pub records: Vec<RealnessRecord>,
    /// Some non-empty draw has `max_n |Im E_n| < REALNESS_THRESHOLD`.
    pub any_real: bool,
    pub draws_with_levels: usize,
}

/// Records `Im E_n` for every draw without asserting anything about it.
pub fn realness_ledger(
    draws: &[PotentialSpec],
    backend: Backend,
    convention: FrequencyConvention,
    exec: Execution,
) -> RealnessLedger {
    let records = exec.map(draws, |spec| {
        let s = spectrum(spec, backend, convention);
        let energies = s.energies();
        let max_abs_im = energies.iter().map(|e| e.im.abs()).reduce(f64::max);
        RealnessRecord {
            spec: spec.clone(),
            n_max: s.n_max,
            energies,
            max_abs_im,
        }
    });
    let any_real = records
        .iter()
        .any(|r| r.max_abs_im.is_some_and(|m| m < REALNESS_THRESHOLD));
    let draws_with_levels = records.iter().filter(|r| r.max_abs_im.is_some()).count();
    RealnessLedger {
        backend,
        convention,
        records,
        any_real,
        draws_with_levels,
    }
}
