//! Uniform 1D grids and functions tabulated on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SipsError};

/// Uniform grid `x_min, x_min + h, ..., x_max` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(SipsError::InvalidGrid("bounds must be finite".into()));
        }
        if x_min >= x_max {
            return Err(SipsError::InvalidGrid(format!(
                "x_min ({x_min}) must be below x_max ({x_max})"
            )));
        }
        if n_points < 3 {
            return Err(SipsError::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// The reference grid `[-20, 20]` with 4001 points (h = 0.01).
    pub fn reference() -> Self {
        Self { x_min: -20.0, x_max: 20.0, n_points: 4001 }
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

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Index of the grid node closest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.x_min) / self.spacing()).round();
        t.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Same grid with the spacing halved.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.x_min, self.x_max, self.n_points)
    }
}

/// Parses the `min:max:n` form used on the command line.
impl FromStr for Grid {
    type Err = SipsError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(SipsError::InvalidGrid(format!("expected min:max:n, got `{s}`")));
        }
        let bound = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| SipsError::InvalidGrid(format!("bad bound `{t}`")))
        };
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| SipsError::InvalidGrid(format!("bad point count `{}`", parts[2])))?;
        Grid::new(bound(parts[0])?, bound(parts[1])?, n)
    }
}

/// A real function sampled on every node of a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(SipsError::InvalidGrid(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SipsError::NonFinite(format!("sample {i} at x = {}", grid.x(i))));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.n_points()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// L2 norm with the trapezoidal rule.
    pub fn norm(&self) -> f64 {
        trapezoid_norm(&self.values, self.grid.spacing())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Rescales to unit trapezoidal norm. Fails on a zero or non-finite norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(SipsError::NonFinite(format!("cannot normalize, norm = {norm}")));
        }
        Ok(self.scaled(1.0 / norm))
    }

    /// Flips the global sign so the first component above `1e-3 * max|f|`
    /// is positive.
    pub fn with_positive_lead(mut self) -> Self {
        let cutoff = 1e-3 * self.max_abs();
        if let Some(lead) = self.values.iter().find(|v| v.abs() > cutoff) {
            if *lead < 0.0 {
                self.values.iter_mut().for_each(|v| *v = -*v);
            }
        }
        self
    }
}

/// `sqrt(h * sum' v_i^2)` with halved end weights.
pub(crate) fn trapezoid_norm(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let mut sum: f64 = values.iter().map(|v| v * v).sum();
    if n > 1 {
        sum -= 0.5 * (values[0] * values[0] + values[n - 1] * values[n - 1]);
    }
    (h * sum).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid_spec() {
        let g: Grid = "-20:20:4001".parse().unwrap();
        assert_eq!(g, Grid::reference());
        assert!((g.spacing() - 0.01).abs() < 1e-15);
        assert_eq!(g.x(4000), 20.0);
        assert_eq!(g.nearest_index(0.0), 2000);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!("1:0:10".parse::<Grid>().is_err());
        assert!("0:1:2".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("a:1:5".parse::<Grid>().is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 5).is_err());
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert!(SampledFunction::new(g, vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(SampledFunction::new(g, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn trapezoid_norm_of_gaussian() {
        let g = Grid::reference();
        let f = SampledFunction::from_fn(g, |x| (-x * x / 2.0).exp()).unwrap();
        // integral of exp(-x^2) is sqrt(pi)
        let expected = std::f64::consts::PI.sqrt().sqrt();
        assert!((f.norm() - expected).abs() < 1e-12);
        assert!((f.normalized().unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sign_fix_uses_first_sizable_component() {
        let g = Grid::new(0.0, 4.0, 5).unwrap();
        let f = SampledFunction::new(g, vec![1e-9, -1.0, 0.5, 2.0, 0.0]).unwrap();
        assert_eq!(f.with_positive_lead().values()[1], 1.0);
    }
}
