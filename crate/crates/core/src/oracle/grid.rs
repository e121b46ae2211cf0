use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::model::PotentialSpec;

/// Uniform grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

pub const DEFAULT_POINTS: usize = 4001;

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self, OracleError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(OracleError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(OracleError::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    /// `[-4/α + r0, 40/α + r0]` with 4001 points.
    pub fn default_for(spec: &PotentialSpec) -> Self {
        Self::default_with_points(spec, DEFAULT_POINTS)
    }

    pub fn default_with_points(spec: &PotentialSpec, n_points: usize) -> Self {
        let a = spec.alpha();
        let r0 = spec.origin_shift();
        Grid::new(-4.0 / a + r0, 40.0 / a + r0, n_points.max(3)).expect("default grid is valid")
    }

    /// Same extent with the spacing halved.
    pub fn refined(&self) -> Self {
        Grid {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weights over the closed interval.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n_points];
        w[0] = 0.5 * h;
        w[self.n_points - 1] = 0.5 * h;
        w
    }

    pub fn same_extent(&self, other: &Grid) -> bool {
        self.x_min == other.x_min && self.x_max == other.x_max
    }
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    #[serde(default, skip_deserializing)]
    spacing: f64,
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr {
            x_min: g.x_min,
            x_max: g.x_max,
            n_points: g.n_points,
            spacing: g.spacing(),
        }
    }
}

impl TryFrom<GridRepr> for Grid {
    type Error = OracleError;
    fn try_from(r: GridRepr) -> Result<Self, Self::Error> {
        Grid::new(r.x_min, r.x_max, r.n_points)
    }
}
