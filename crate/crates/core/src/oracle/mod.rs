//! Finite-difference Schrödinger eigensolver and pointwise residual tester.
//!
//! Real potentials go through a symmetric tridiagonal solver (Sturm
//! bisection plus inverse iteration). Complex potentials build the dense
//! matrix and take all eigenvalues by Hessenberg QR, so the dimension is
//! capped at [`MAX_DENSE_DIM`].

mod grid;
mod hamiltonian;
pub mod hessenberg;
pub mod tridiagonal;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::PotentialSpec;
use crate::specfun::Complex;

pub use grid::{Grid, DEFAULT_POINTS};
pub use hamiltonian::{discretize, BandedHamiltonian, Stencil};

/// Bound states need max |ψ| over the outer 5% below this fraction of the peak.
pub const LEAK_TOLERANCE: f64 = 1e-6;

/// Fraction of the nodes at each end inspected by the leak test.
pub const LEAK_STRIP_FRACTION: f64 = 0.01;

/// Largest interior dimension accepted by the dense complex route.
pub const MAX_DENSE_DIM: usize = 2000;

/// Cells skipped at each end by [`residual`].
pub const RESIDUAL_EDGE_CELLS: usize = 3;

const INVERSE_ITERATION_STEPS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("QR iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("dense complex route needs dimension <= {max}, got {dim}")]
    GridTooLarge { dim: usize, max: usize },
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("requested level {requested} but only {available} states were computed")]
    LevelUnavailable { requested: usize, available: usize },
    #[error("wavefunction norm on the grid is below 1e-300")]
    Degenerate,
    #[error("eigenvectors are only available for the three-point stencil")]
    UnsupportedStencil,
}

/// Which eigensolver produced an [`OracleResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverRoute {
    SymmetricTridiagonal,
    DenseComplexQr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Sorted by real part, ascending.
    pub energies: Vec<Complex>,
    /// One vector per energy over all grid nodes, zero at both ends,
    /// normalized so that `Σ|ψ|² h = 1`.
    #[serde(skip)]
    pub vectors: Vec<Vec<Complex>>,
    pub grid: Grid,
    pub boundary_leak: Vec<f64>,
    /// `‖Hv − Ev‖ / ‖v‖` of each pair against its own matrix.
    pub matrix_residual: Vec<f64>,
    pub route: SolverRoute,
}

impl OracleResult {
    pub fn accepted(&self, i: usize) -> bool {
        self.boundary_leak[i] < LEAK_TOLERANCE
    }

    /// Accepted states with negative real energy.
    pub fn bound_count(&self) -> usize {
        (0..self.energies.len())
            .filter(|&i| self.energies[i].re < 0.0 && self.accepted(i))
            .count()
    }

    /// States with negative real energy, regardless of leak.
    pub fn negative_count(&self) -> usize {
        self.energies.iter().filter(|e| e.re < 0.0).count()
    }

    /// Writes `x,re,im` rows for state `i`.
    pub fn write_vector_csv<W: Write>(&self, i: usize, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,re,im")?;
        for (j, z) in self.vectors[i].iter().enumerate() {
            writeln!(out, "{},{},{}", self.grid.point(j), z.re, z.im)?;
        }
        Ok(())
    }
}

fn boundary_leak(psi: &[Complex]) -> f64 {
    let n = psi.len();
    let edge = ((LEAK_STRIP_FRACTION * n as f64).ceil() as usize).max(1);
    let peak = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return f64::INFINITY;
    }
    let outer = psi[..edge]
        .iter()
        .chain(&psi[n - edge..])
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    outer / peak
}

/// `‖Hv − Ev‖₂ / ‖v‖₂` over interior nodes.
pub fn matrix_residual(h: &BandedHamiltonian, e: Complex, v: &[Complex]) -> f64 {
    let hv = h.apply(v);
    let num: f64 = hv.iter().zip(v).map(|(a, b)| (a - e * b).norm_sqr()).sum();
    let den: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (num / den).sqrt()
}

fn finish_vector(interior: Vec<Complex>, grid: &Grid) -> Vec<Complex> {
    let mut full = Vec::with_capacity(grid.n_points());
    full.push(Complex::new(0.0, 0.0));
    full.extend(interior);
    full.push(Complex::new(0.0, 0.0));
    // fix the phase so the largest component is real and positive
    let pivot = full
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { Complex::new(1.0, 0.0) };
    let norm = (full.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing()).sqrt();
    full.iter().map(|z| z * phase / norm).collect()
}

/// The `k` lowest eigenpairs (by real part) of a three-point Hamiltonian.
pub fn solve_hamiltonian(h: &BandedHamiltonian, grid: &Grid, k: usize) -> Result<OracleResult, OracleError> {
    if h.stencil != Stencil::ThreePoint {
        return Err(OracleError::UnsupportedStencil);
    }
    let n = h.dim();
    let off = vec![h.bands[0]; n.saturating_sub(1)];
    let (energies, route) = if h.is_real() {
        let diag: Vec<f64> = h.diag.iter().map(|d| d.re).collect();
        let ev = tridiagonal::lowest_eigenvalues(&diag, &off, k);
        (ev.into_iter().map(|e| Complex::new(e, 0.0)).collect::<Vec<_>>(), SolverRoute::SymmetricTridiagonal)
    } else {
        if n > MAX_DENSE_DIM {
            return Err(OracleError::GridTooLarge { dim: n, max: MAX_DENSE_DIM });
        }
        let dense = hessenberg::DenseMatrix::from_rows(&h.to_dense());
        let mut ev = hessenberg::eigenvalues(dense)?;
        ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ev.truncate(k);
        (ev, SolverRoute::DenseComplexQr)
    };
    let mut vectors = Vec::with_capacity(energies.len());
    let mut leaks = Vec::with_capacity(energies.len());
    let mut residuals = Vec::with_capacity(energies.len());
    for &e in &energies {
        let v = tridiagonal::inverse_iteration(&h.diag, &off, e, INVERSE_ITERATION_STEPS);
        residuals.push(matrix_residual(h, e, &v));
        let full = finish_vector(v, grid);
        leaks.push(boundary_leak(&full));
        vectors.push(full);
    }
    Ok(OracleResult {
        energies,
        vectors,
        grid: *grid,
        boundary_leak: leaks,
        matrix_residual: residuals,
        route,
    })
}

/// Lowest `k` eigenpairs of `p²/2m + V` on `grid`, three-point stencil.
pub fn eigen_states<F>(potential: F, mass: f64, grid: &Grid, k: usize) -> Result<OracleResult, OracleError>
where
    F: Fn(f64) -> Complex,
{
    let h = discretize(potential, mass, grid, Stencil::ThreePoint)?;
    solve_hamiltonian(&h, grid, k)
}

/// Lowest `k` eigenpairs for a Morse variant.
pub fn eigen_bound_states(spec: &PotentialSpec, grid: &Grid, k: usize) -> Result<OracleResult, OracleError> {
    eigen_states(|x| spec.evaluate(x), spec.mass(), grid, k)
}

/// [`residual_with`] for a Morse variant.
pub fn residual<P>(spec: &PotentialSpec, e: Complex, psi: P, grid: &Grid) -> Result<f64, OracleError>
where
    P: Fn(f64) -> Complex,
{
    residual_with(|x| spec.evaluate(x), spec.mass(), e, psi, grid)
}

/// `‖Hψ − Eψ‖₂ / ‖ψ‖₂` with the five-point stencil, skipping
/// [`RESIDUAL_EDGE_CELLS`] cells at each end.
pub fn residual_with<F, P>(potential: F, mass: f64, e: Complex, psi: P, grid: &Grid) -> Result<f64, OracleError>
where
    F: Fn(f64) -> Complex,
    P: Fn(f64) -> Complex,
{
    let n = grid.n_points();
    let edge = RESIDUAL_EDGE_CELLS;
    if n < 2 * edge + 2 {
        return Err(OracleError::InvalidGrid(format!("residual needs at least {} points", 2 * edge + 2)));
    }
    let values: Vec<Complex> = (0..n).map(|i| psi(grid.point(i))).collect();
    let (c0, c1, c2) = Stencil::FivePoint.kinetic_weights(mass, grid.spacing());
    let mut num = 0.0;
    let mut den = 0.0;
    for i in edge..n - edge {
        let hpsi = values[i] * c0
            + (values[i - 1] + values[i + 1]) * c1
            + (values[i - 2] + values[i + 2]) * c2
            + potential(grid.point(i)) * values[i];
        num += (hpsi - e * values[i]).norm_sqr();
        den += values[i].norm_sqr();
    }
    if den.sqrt() < 1e-300 {
        return Err(OracleError::Degenerate);
    }
    Ok((num / den).sqrt())
}

/// `(4·E_{h/2} − E_h)/3`.
pub fn richardson_combine(coarse: Complex, fine: Complex) -> Complex {
    (fine * 4.0 - coarse) / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RichardsonEstimate {
    pub coarse: Complex,
    pub fine: Complex,
    pub extrapolated: Complex,
}

fn check_pair(coarse: &Grid, fine: &Grid) -> Result<(), OracleError> {
    if !coarse.same_extent(fine) {
        return Err(OracleError::GridMismatch(format!(
            "extents [{}, {}] and [{}, {}] differ",
            coarse.x_min(),
            coarse.x_max(),
            fine.x_min(),
            fine.x_max()
        )));
    }
    if fine.n_points() - 1 != 2 * (coarse.n_points() - 1) {
        return Err(OracleError::GridMismatch(format!(
            "{} and {} points are not spacings h and h/2",
            coarse.n_points(),
            fine.n_points()
        )));
    }
    Ok(())
}

/// Richardson-extrapolated level `n_level` from a grid and its halving.
pub fn richardson_with<F>(
    potential: F,
    mass: f64,
    n_level: usize,
    coarse: &Grid,
    fine: &Grid,
) -> Result<RichardsonEstimate, OracleError>
where
    F: Fn(f64) -> Complex,
{
    check_pair(coarse, fine)?;
    let level = |g: &Grid| -> Result<Complex, OracleError> {
        let r = eigen_states(&potential, mass, g, n_level + 1)?;
        r.energies.get(n_level).copied().ok_or(OracleError::LevelUnavailable {
            requested: n_level,
            available: r.energies.len(),
        })
    };
    let e_h = level(coarse)?;
    let e_h2 = level(fine)?;
    Ok(RichardsonEstimate {
        coarse: e_h,
        fine: e_h2,
        extrapolated: richardson_combine(e_h, e_h2),
    })
}

pub fn richardson(spec: &PotentialSpec, n_level: usize, coarse: &Grid, fine: &Grid) -> Result<RichardsonEstimate, OracleError> {
    richardson_with(|x| spec.evaluate(x), spec.mass(), n_level, coarse, fine)
}
