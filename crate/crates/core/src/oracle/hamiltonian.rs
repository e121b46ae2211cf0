use serde::{Deserialize, Serialize};

use super::{Grid, OracleError};
use crate::specfun::Complex;

/// Finite-difference stencil for `-ψ''/(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stencil {
    /// Second order, tridiagonal.
    ThreePoint,
    /// Fourth order, pentadiagonal.
    FivePoint,
}

impl Stencil {
    /// Kinetic weights `(center, first neighbour, second neighbour)` for
    /// `-ψ''/(2m)` at spacing `h`.
    pub fn kinetic_weights(self, mass: f64, h: f64) -> (f64, f64, f64) {
        let s = 1.0 / (2.0 * mass * h * h);
        match self {
            Stencil::ThreePoint => (2.0 * s, -s, 0.0),
            Stencil::FivePoint => (30.0 / 12.0 * s, -16.0 / 12.0 * s, 1.0 / 12.0 * s),
        }
    }

    pub fn half_width(self) -> usize {
        match self {
            Stencil::ThreePoint => 1,
            Stencil::FivePoint => 2,
        }
    }
}

/// Discretized `H = p²/2m + V` on the interior nodes of a grid, with
/// Dirichlet conditions at both endpoints.
///
/// Row `i` corresponds to grid node `i + 1`. The kinetic part is real and
/// symmetric; `diag` carries the kinetic center weight plus `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHamiltonian {
    pub diag: Vec<Complex>,
    /// Off-diagonal kinetic weight at distance 1, 2, ...
    pub bands: Vec<f64>,
    pub stencil: Stencil,
}

impl BandedHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_real(&self) -> bool {
        self.diag.iter().all(|d| d.im == 0.0)
    }

    /// `H v` for a vector over the interior nodes.
    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match the interior size");
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                for (k, &w) in self.bands.iter().enumerate() {
                    let d = k + 1;
                    if i >= d {
                        acc += v[i - d] * w;
                    }
                    if i + d < n {
                        acc += v[i + d] * w;
                    }
                }
                acc
            })
            .collect()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<Complex>> {
        let n = self.dim();
        let mut a = vec![vec![Complex::new(0.0, 0.0); n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            for (k, &w) in self.bands.iter().enumerate() {
                let d = k + 1;
                if i + d < n {
                    a[i][i + d] = Complex::new(w, 0.0);
                    a[i + d][i] = Complex::new(w, 0.0);
                }
            }
        }
        a
    }
}

/// Builds the banded Hamiltonian for `potential` on `grid`.
pub fn discretize<F>(potential: F, mass: f64, grid: &Grid, stencil: Stencil) -> Result<BandedHamiltonian, OracleError>
where
    F: Fn(f64) -> Complex,
{
    if !(mass.is_finite() && mass > 0.0) {
        return Err(OracleError::InvalidGrid(format!("mass must be > 0, got {mass}")));
    }
    if stencil == Stencil::FivePoint && grid.n_points() < 5 {
        return Err(OracleError::InvalidGrid(
            "five-point stencil needs at least 5 points".into(),
        ));
    }
    let (center, w1, w2) = stencil.kinetic_weights(mass, grid.spacing());
    let diag = (1..grid.n_points() - 1)
        .map(|i| potential(grid.point(i)) + center)
        .collect();
    let bands = match stencil {
        Stencil::ThreePoint => vec![w1],
        Stencil::FivePoint => vec![w1, w2],
    };
    Ok(BandedHamiltonian { diag, bands, stencil })
}
