//! Radial-oscillator propagator: closed form, spectral sum, time-sliced
//! (Trotter) composition, and ground-level extraction from Euclidean decay.
//!
//! Numeric work is done at Euclidean pseudo-time `S = -iτ`, where every
//! term decays as `e^{-ε_n τ}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::{EffectiveOscillator, RadialOscillator};
use crate::specfun::{bessel_i_scaled, laguerre_sequence, log_gamma, Complex, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagatorError {
    #[error("field `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("caustic: sin(ωS) vanishes at ωS = {0}")]
    Caustic(Complex),
    #[error("real-time evaluation is limited to |ωS| < π/2, got {0}")]
    RealTimeRange(f64),
    #[error("spectral sums need Euclidean time S = -iτ")]
    NotEuclidean,
    #[error("need at least 3 τ values, got {0}")]
    TooFewTimes(usize),
    #[error("τ values must be strictly ascending")]
    UnsortedTimes,
    #[error("|K| does not decay monotonically between τ = {0} and τ = {1}")]
    NonMonotonicDecay(f64, f64),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("unknown kernel method `{0}` (expected closed, spectral or sliced)")]
    UnknownMethod(String),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> PropagatorError {
    PropagatorError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub mass: Complex,
    pub omega: Complex,
    pub nu: Complex,
    pub u_a: f64,
    pub u_b: f64,
    /// Pseudo-time `S`; Euclidean parameters store `S = -iτ`.
    pub time: Complex,
}

impl KernelParams {
    pub fn euclidean(mass: Complex, omega: Complex, nu: Complex, u_a: f64, u_b: f64, tau: f64) -> Result<Self, PropagatorError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(invalid("tau", format!("must be > 0, got {tau}")));
        }
        let p = KernelParams {
            mass,
            omega,
            nu,
            u_a,
            u_b,
            time: Complex::new(0.0, -tau),
        };
        p.validate()?;
        Ok(p)
    }

    /// Real pseudo-time `S`, for short-time diagnostics only.
    pub fn real_time(mass: Complex, omega: Complex, nu: Complex, u_a: f64, u_b: f64, s: f64) -> Result<Self, PropagatorError> {
        let p = KernelParams {
            mass,
            omega,
            nu,
            u_a,
            u_b,
            time: Complex::new(s, 0.0),
        };
        p.validate()?;
        if (omega * s).norm() >= std::f64::consts::FRAC_PI_2 {
            return Err(PropagatorError::RealTimeRange((omega * s).norm()));
        }
        Ok(p)
    }

    fn validate(&self) -> Result<(), PropagatorError> {
        if !(self.u_a.is_finite() && self.u_a > 0.0) {
            return Err(invalid("u_a", format!("must be > 0, got {}", self.u_a)));
        }
        if !(self.u_b.is_finite() && self.u_b > 0.0) {
            return Err(invalid("u_b", format!("must be > 0, got {}", self.u_b)));
        }
        if self.mass.norm() == 0.0 || !self.mass.re.is_finite() {
            return Err(invalid("mass", "must be nonzero and finite"));
        }
        Ok(())
    }

    /// `τ` when `S = -iτ`.
    pub fn tau(&self) -> Option<f64> {
        (self.time.re == 0.0 && self.time.im < 0.0).then_some(-self.time.im)
    }

    pub fn with_tau(self, tau: f64) -> Result<Self, PropagatorError> {
        Self::euclidean(self.mass, self.omega, self.nu, self.u_a, self.u_b, tau)
    }

    pub fn swapped(self) -> Self {
        KernelParams {
            u_a: self.u_b,
            u_b: self.u_a,
            ..self
        }
    }
}

/// Closed-form radial oscillator kernel
/// `(Mω√(u_a u_b)/(i sin ωS)) exp[(iMω/2)(u_a²+u_b²) cot ωS] I_ν(Mω u_a u_b/(i sin ωS))`.
pub fn kernel_closed(p: &KernelParams) -> Result<Complex, PropagatorError> {
    let i = Complex::i();
    let ws = p.omega * p.time;
    // f = Mω / sin ωS, g = Mω cot ωS, with the ω → 0 limits
    let (f, g) = if ws.norm() < 1e-6 {
        let base = p.mass / p.time;
        (base * (1.0 + ws * ws / 6.0), base * (1.0 - ws * ws / 3.0))
    } else {
        let s = ws.sin();
        if s.norm() < 1e-14 * (1.0 + ws.norm()) {
            return Err(PropagatorError::Caustic(ws));
        }
        (p.mass * p.omega / s, p.mass * p.omega * ws.cos() / s)
    };
    let (ua, ub) = (p.u_a, p.u_b);
    let arg = f * (ua * ub) / i;
    let expo = i * g * (0.5 * (ua * ua + ub * ub));
    // I_ν(w) = e^{w} Ie_ν(w) for Re w ≥ 0; fold e^{w} into the Gaussian
    let (bessel, shift) = if arg.re >= 0.0 {
        (bessel_i_scaled(p.nu, arg)?, arg)
    } else {
        (crate::specfun::bessel_i(p.nu, arg)?, Complex::new(0.0, 0.0))
    };
    Ok(f * (ua * ub).sqrt() / i * (expo + shift).exp() * bessel)
}

/// Spectral sum `Σ_{n<n_trunc} e^{-ω(2n+1+ν)τ} ψ_n(u_b) ψ_n(u_a)` with
/// `ψ_n(u) = N_n u^{ν+½} e^{-Mωu²/2} L_n^ν(Mωu²)`,
/// `N_n² = 2(Mω)^{ν+1} n!/Γ(n+ν+1)`.
pub fn kernel_spectral(p: &KernelParams, n_trunc: usize) -> Result<Complex, PropagatorError> {
    let tau = p.tau().ok_or(PropagatorError::NotEuclidean)?;
    if n_trunc == 0 {
        return Err(invalid("n_trunc", "must be >= 1"));
    }
    let mw = p.mass * p.omega;
    let (xa, xb) = (mw * (p.u_a * p.u_a), mw * (p.u_b * p.u_b));
    let la = laguerre_sequence(n_trunc, p.nu, xa);
    let lb = laguerre_sequence(n_trunc, p.nu, xb);
    // n-independent part of ψ_n(u_a) ψ_n(u_b), in logs
    let common = (2.0f64).ln() + (p.nu + 1.0) * mw.ln() + (p.nu + 0.5) * (p.u_a * p.u_b).ln() - (xa + xb) * 0.5
        - p.omega * (p.nu + 1.0) * tau;
    let mut sum = Complex::new(0.0, 0.0);
    for n in 0..n_trunc {
        let nf = n as f64;
        let log_w = common + log_gamma(Complex::new(nf + 1.0, 0.0))? - log_gamma(p.nu + nf + 1.0)? - p.omega * (2.0 * nf * tau);
        sum += log_w.exp() * la[n] * lb[n];
    }
    Ok(sum)
}

/// Uniform nodes `u_k = k h`, `k = 1..=n_points`, `h = u_max / n_points`;
/// trapezoid weights with `u = 0` dropped (the integrand vanishes there).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub u_max: f64,
    pub n_points: usize,
}

pub const RADIAL_POINTS: usize = 2000;

impl RadialGrid {
    pub fn new(u_max: f64, n_points: usize) -> Result<Self, PropagatorError> {
        if !(u_max.is_finite() && u_max > 0.0) {
            return Err(invalid("u_max", format!("must be > 0, got {u_max}")));
        }
        if n_points < 2 {
            return Err(invalid("n_points", "need at least 2 nodes"));
        }
        Ok(RadialGrid { u_max, n_points })
    }

    /// `u_max = 6 sqrt((2n+1)/(Mω))` for the targeted level `n`.
    pub fn for_level(mass: Complex, omega: Complex, n_target: usize, n_points: usize) -> Result<Self, PropagatorError> {
        let mw = (mass * omega).norm();
        Self::new(6.0 * ((2.0 * n_target as f64 + 1.0) / mw).sqrt(), n_points)
    }

    /// Widens the grid, at the same node count, so it reaches at least
    /// twice `u`.
    pub fn max_u(self, u: f64) -> Result<Self, PropagatorError> {
        Self::new(self.u_max.max(2.0 * u), self.n_points)
    }

    pub fn spacing(&self) -> f64 {
        self.u_max / self.n_points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.n_points).map(|k| k as f64 * h).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.spacing(); self.n_points];
        w[self.n_points - 1] *= 0.5;
        w
    }
}

/// Exact free radial kernel over one slice,
/// `(M√(uu')/ε) exp(-M(u-u')²/2ε) Ie_ν(Muu'/ε)`.
fn free_radial(mass: Complex, nu: Complex, eps: f64, u: f64, v: f64) -> Result<Complex, SpecFunError> {
    let gauss = -mass * ((u - v) * (u - v) / (2.0 * eps));
    if gauss.re < -700.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let arg = mass * (u * v / eps);
    Ok(mass * ((u * v).sqrt() / eps) * gauss.exp() * bessel_i_scaled(nu, arg)?)
}

/// Trotter-sliced amplitude with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicedKernel {
    pub value: Complex,
    /// Share of the final quadrature carried by the two end nodes.
    pub endpoint_fraction: f64,
    /// `endpoint_fraction > ENDPOINT_TOLERANCE`; informational only.
    pub endpoint_warning: bool,
}

pub const ENDPOINT_TOLERANCE: f64 = 1e-10;

struct SliceOperator {
    nodes: Vec<f64>,
    /// `w_i e^{-ε V(u_i)}`
    weighted: Vec<Complex>,
    /// Dense free kernel between nodes, row-major.
    g: Vec<Complex>,
    eps: f64,
    osc: RadialOscillator,
    nu: Complex,
}

impl SliceOperator {
    fn build(osc: &RadialOscillator, tau: f64, n_slices: usize, grid: &RadialGrid, exec: Execution) -> Result<Self, PropagatorError> {
        let eps = tau / n_slices as f64;
        let nodes = grid.nodes();
        let n = nodes.len();
        let nu = osc.bessel_order();
        let weighted = nodes
            .iter()
            .zip(grid.weights())
            .map(|(&u, w)| (-osc.harmonic(u) * eps).exp() * w)
            .collect();
        let rows: Vec<Result<Vec<Complex>, SpecFunError>> = exec.map_index(n, |i| {
            (0..n).map(|j| free_radial(osc.mass, nu, eps, nodes[i], nodes[j])).collect()
        });
        let mut g = Vec::with_capacity(n * n);
        for r in rows {
            g.extend(r?);
        }
        Ok(SliceOperator {
            nodes,
            weighted,
            g,
            eps,
            osc: *osc,
            nu,
        })
    }

    fn half_potential(&self, u: f64) -> Complex {
        (-self.osc.harmonic(u) * (0.5 * self.eps)).exp()
    }

    /// `G (W v)`.
    fn step(&self, v: &[Complex], exec: Execution) -> Vec<Complex> {
        let n = self.nodes.len();
        let wv: Vec<Complex> = v.iter().zip(&self.weighted).map(|(a, b)| a * b).collect();
        exec.map_index(n, |i| {
            let row = &self.g[i * n..(i + 1) * n];
            row.iter().zip(&wv).map(|(a, b)| a * b).sum()
        })
    }

    /// Column `G(u_i, u_a) e^{-εV(u_a)/2}`.
    fn source(&self, u_a: f64) -> Result<Vec<Complex>, PropagatorError> {
        let half = self.half_potential(u_a);
        self.nodes
            .iter()
            .map(|&u| Ok(free_radial(self.osc.mass, self.nu, self.eps, u, u_a)? * half))
            .collect()
    }
}

fn check_slicing(u_a: f64, tau: f64, n_slices: usize) -> Result<(), PropagatorError> {
    if !(u_a.is_finite() && u_a > 0.0) {
        return Err(invalid("u", format!("must be > 0, got {u_a}")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid("tau", format!("must be > 0, got {tau}")));
    }
    if n_slices == 0 {
        return Err(invalid("n_slices", "must be >= 1"));
    }
    Ok(())
}

/// `K(u_i, u_a)` on every grid node after `n_slices` symmetric Trotter
/// steps: exact free radial kinetic factors and `e^{-ε ½Mω²u²}` potential
/// factors, half at each end.
pub fn kernel_sliced_column(
    osc: &RadialOscillator,
    u_a: f64,
    tau: f64,
    n_slices: usize,
    grid: &RadialGrid,
    exec: Execution,
) -> Result<Vec<Complex>, PropagatorError> {
    check_slicing(u_a, tau, n_slices)?;
    let op = SliceOperator::build(osc, tau, n_slices, grid, exec)?;
    let mut v = op.source(u_a)?;
    for _ in 1..n_slices {
        v = op.step(&v, exec);
    }
    Ok(v.iter().zip(&op.nodes).map(|(z, &u)| z * op.half_potential(u)).collect())
}

/// Trotter-sliced `K(τ; u_a, u_b)`.
pub fn kernel_sliced(
    osc: &RadialOscillator,
    u_a: f64,
    u_b: f64,
    tau: f64,
    n_slices: usize,
    grid: &RadialGrid,
    exec: Execution,
) -> Result<SlicedKernel, PropagatorError> {
    check_slicing(u_a, tau, n_slices)?;
    check_slicing(u_b, tau, n_slices)?;
    let op = SliceOperator::build(osc, tau, n_slices, grid, exec)?;
    let ends = op.half_potential(u_a) * op.half_potential(u_b);
    if n_slices == 1 {
        return Ok(SlicedKernel {
            value: free_radial(osc.mass, op.nu, op.eps, u_b, u_a)? * ends,
            endpoint_fraction: 0.0,
            endpoint_warning: false,
        });
    }
    let mut v = op.source(u_a)?;
    for _ in 2..n_slices {
        v = op.step(&v, exec);
    }
    let sink = op.source(u_b)?;
    let terms: Vec<Complex> = (0..v.len()).map(|i| sink[i] * op.weighted[i] * v[i]).collect();
    let total: f64 = terms.iter().map(|t| t.norm()).sum();
    let edge = terms[0].norm() + terms[terms.len() - 1].norm();
    let endpoint_fraction = if total > 0.0 { edge / total } else { 0.0 };
    Ok(SlicedKernel {
        value: terms.iter().sum(),
        endpoint_fraction,
        endpoint_warning: endpoint_fraction > ENDPOINT_TOLERANCE,
    })
}

/// `∫ K(τ₁; u_a, u) K(τ₂; u, u_b) du` on `grid`, for comparison with
/// `K(τ₁+τ₂; u_a, u_b)`.
pub fn compose_closed(p: &KernelParams, tau1: f64, tau2: f64, grid: &RadialGrid) -> Result<Complex, PropagatorError> {
    let mut sum = Complex::new(0.0, 0.0);
    for (u, w) in grid.nodes().into_iter().zip(grid.weights()) {
        let first = KernelParams { u_b: u, ..p.with_tau(tau1)? };
        let second = KernelParams { u_a: u, ..p.with_tau(tau2)? };
        sum += kernel_closed(&first)? * kernel_closed(&second)? * w;
    }
    Ok(sum)
}

/// Slope of `-ln|K(τ)|` against `τ` by least squares.
pub fn extract_ground_pseudo_energy<F>(kernel: F, taus: &[f64]) -> Result<Complex, PropagatorError>
where
    F: Fn(f64) -> Result<Complex, PropagatorError>,
{
    if taus.len() < 3 {
        return Err(PropagatorError::TooFewTimes(taus.len()));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(PropagatorError::UnsortedTimes);
    }
    let mut ys = Vec::with_capacity(taus.len());
    for &t in taus {
        ys.push(kernel(t)?.norm());
    }
    for (i, w) in ys.windows(2).enumerate() {
        if !(w[1] < w[0]) {
            return Err(PropagatorError::NonMonotonicDecay(taus[i], taus[i + 1]));
        }
    }
    let ys: Vec<f64> = ys.iter().map(|y| -y.ln()).collect();
    let n = taus.len() as f64;
    let mx = taus.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = taus.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = taus.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(Complex::new(sxy / sxx, 0.0))
}

/// Solves `ε_n(E) = pseudo_energy` for `E` using only the oscillator's
/// level and centrifugal relations.
pub fn energy_from_pole(effective: &EffectiveOscillator, n: usize) -> Complex {
    // ω(2n + 1 + ν) = V2
    let nu = effective.pseudo_energy / effective.omega - (2.0 * n as f64 + 1.0);
    let c = RadialOscillator::from_bessel_order(effective.mass, effective.omega, nu).centrifugal_coeff;
    // the centrifugal coefficient is affine in E
    let c0 = effective.centrifugal_coeff(Complex::new(0.0, 0.0));
    let c1 = effective.centrifugal_coeff(Complex::new(1.0, 0.0));
    (c - c0) / (c1 - c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    Closed,
    Spectral,
    Sliced,
}

impl KernelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelMethod::Closed => "closed",
            KernelMethod::Spectral => "spectral",
            KernelMethod::Sliced => "sliced",
        }
    }
}

impl fmt::Display for KernelMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelMethod {
    type Err = PropagatorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed" => Ok(KernelMethod::Closed),
            "spectral" => Ok(KernelMethod::Spectral),
            "sliced" => Ok(KernelMethod::Sliced),
            _ => Err(PropagatorError::UnknownMethod(s.to_string())),
        }
    }
}

/// One CSV row of a kernel sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub tau: f64,
    pub u_a: f64,
    pub u_b: f64,
    pub re: f64,
    pub im: f64,
    pub method: KernelMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub n_trunc: usize,
    pub n_slices: usize,
    pub radial_points: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            n_trunc: 80,
            n_slices: 256,
            radial_points: RADIAL_POINTS,
        }
    }
}

/// Evaluates every method at every `τ`, ordered by `(τ, method)`.
///
/// `params` supplies `M, ω, ν, u_a, u_b`; its time is ignored. Sweeps fan
/// out over `τ`; the sliced method runs its matrix products sequentially
/// inside each point.
pub fn kernel_sweep(
    params: &KernelParams,
    taus: &[f64],
    methods: &[KernelMethod],
    settings: SweepSettings,
    exec: Execution,
) -> Result<Vec<KernelSample>, PropagatorError> {
    let osc = RadialOscillator::from_bessel_order(params.mass, params.omega, params.nu);
    let grid = RadialGrid::for_level(params.mass, params.omega, 0, settings.radial_points)?
        .max_u(params.u_a.max(params.u_b))?;
    let points: Vec<(f64, KernelMethod)> = taus
        .iter()
        .flat_map(|&t| methods.iter().map(move |&m| (t, m)))
        .collect();
    let results = exec.map(&points, |&(tau, method)| -> Result<KernelSample, PropagatorError> {
        let p = params.with_tau(tau)?;
        let value = match method {
            KernelMethod::Closed => kernel_closed(&p)?,
            KernelMethod::Spectral => kernel_spectral(&p, settings.n_trunc)?,
            KernelMethod::Sliced => {
                kernel_sliced(&osc, p.u_a, p.u_b, tau, settings.n_slices, &grid, Execution::Sequential)?.value
            }
        };
        Ok(KernelSample {
            tau,
            u_a: p.u_a,
            u_b: p.u_b,
            re: value.re,
            im: value.im,
            method,
        })
    });
    results.into_iter().collect()
}
