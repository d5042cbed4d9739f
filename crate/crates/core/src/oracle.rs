//! Independent finite-difference eigensolver for `-d²/dx² + V`.
//!
//! Deliberately simple and separate from the ladder machinery: a
//! second-order three-point Laplacian with Dirichlet walls, Sturm-sequence
//! bisection for eigenvalues and inverse iteration for eigenvectors.

use serde::{Deserialize, Serialize};

use crate::catalog::{ParameterPoint, SuperpotentialModel};
use crate::error::{Result, SipsError};
use crate::grid::{Grid, SampledFunction};
use crate::susy::Spectrum;

const BISECTION_CAP: usize = 500;
const INVERSE_ITERATION_CAP: usize = 60;
const PIVOT_FLOOR: f64 = 1e-300;

/// Symmetric tridiagonal matrix acting on the interior nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    off: Vec<f64>,
    grid: Grid,
}

impl TridiagonalOperator {
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence count).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let coupling = if i > 0 { self.off[i - 1] * self.off[i - 1] / q } else { 0.0 };
            q = self.diag[i] - lambda - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + lambda.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * v[i];
                if i > 0 {
                    y += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * v[i + 1];
                }
                y
            })
            .collect()
    }
}

/// `diag_i = 2/h² + V(x_i)`, `off_i = -1/h²` on the interior nodes;
/// `psi = 0` at both ends of the grid.
pub fn discretize_hamiltonian(v: impl Fn(f64) -> f64, grid: &Grid) -> Result<TridiagonalOperator> {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let interior = grid.n_points() - 2;
    let mut diag = Vec::with_capacity(interior);
    for i in 1..=interior {
        let x = grid.x(i);
        let vx = v(x);
        if !vx.is_finite() {
            return Err(SipsError::NonFinite(format!("potential at x = {x}")));
        }
        diag.push(2.0 * inv_h2 + vx);
    }
    Ok(TridiagonalOperator { diag, off: vec![-inv_h2; interior.saturating_sub(1)], grid: *grid })
}

/// Discretized `H-` of a catalog model.
pub fn hamiltonian_minus(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    model.validate(p)?;
    discretize_hamiltonian(|x| model.v_minus_unchecked(x, p), grid)
}

/// Discretized `H+` of a catalog model.
pub fn hamiltonian_plus(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    model.validate(p)?;
    discretize_hamiltonian(|x| model.v_plus_unchecked(x, p), grid)
}

/// Eigenvalue number `index` (zero-based) bracketed to width `tol`.
pub fn eigenvalue_by_bisection(op: &TridiagonalOperator, index: usize, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = op.gershgorin_bounds();
    lo -= 1.0;
    hi += 1.0;
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if op.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(SipsError::IterationCap { index, lo, hi })
}

/// The `k` smallest eigenvalues, ascending, each bracketed to width `tol`.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize, tol: f64) -> Result<Vec<f64>> {
    if k > op.dim() {
        return Err(SipsError::InvalidGrid(format!(
            "asked for {k} eigenvalues of a {}-dimensional operator",
            op.dim()
        )));
    }
    (0..k).map(|i| eigenvalue_by_bisection(op, i, tol)).collect()
}

/// Solves `(T - shift) y = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(op: &TridiagonalOperator, shift: f64, b: &[f64]) -> Vec<f64> {
    let n = op.dim();
    // rows hold (main, first super, second super) after elimination
    let mut d: Vec<f64> = op.diag.iter().map(|v| v - shift).collect();
    let mut u1: Vec<f64> = op.off.clone();
    u1.push(0.0);
    let mut u2 = vec![0.0; n];
    let mut sub: Vec<f64> = op.off.clone();
    let mut rhs = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if sub[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (di, u1i, u2i, ri) = (d[i], u1[i], u2[i], rhs[i]);
            d[i] = sub[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            rhs[i] = rhs[i + 1];
            sub[i] = di;
            d[i + 1] = u1i;
            u1[i + 1] = u2i;
            rhs[i + 1] = ri;
        }
        if d[i].abs() < PIVOT_FLOOR {
            d[i] = PIVOT_FLOOR;
        }
        let factor = sub[i] / d[i];
        d[i + 1] -= factor * u1[i];
        u1[i + 1] -= factor * u2[i];
        rhs[i + 1] -= factor * rhs[i];
    }
    if n > 0 && d[n - 1].abs() < PIVOT_FLOOR {
        d[n - 1] = PIVOT_FLOOR;
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= u1[i] * y[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * y[i + 2];
        }
        y[i] = acc / d[i];
    }
    y
}

fn unit(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Eigenvector for an eigenvalue estimate `energy`, by inverse iteration.
/// Returned on the full grid (zero at the walls), unit trapezoidal norm,
/// first sizable component positive.
pub fn eigenvector(op: &TridiagonalOperator, energy: f64) -> Result<SampledFunction> {
    let n = op.dim();
    // a nudge off the eigenvalue keeps the shifted system solvable
    let shift = energy + 1e-11 * (1.0 + energy.abs());
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect();
    unit(&mut v);
    let mut change = f64::INFINITY;
    for _ in 0..INVERSE_ITERATION_CAP {
        let mut next = solve_shifted(op, shift, &v);
        if next.iter().any(|x| !x.is_finite()) {
            return Err(SipsError::NonConvergence { energy, change });
        }
        unit(&mut next);
        let dot: f64 = next.iter().zip(&v).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            next.iter_mut().for_each(|x| *x = -*x);
        }
        change = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if change < 1e-12 {
            let mut values = Vec::with_capacity(n + 2);
            values.push(0.0);
            values.extend(v);
            values.push(0.0);
            return Ok(SampledFunction::new(op.grid, values)?.normalized()?.with_positive_lead());
        }
    }
    Err(SipsError::NonConvergence { energy, change })
}

/// `||T psi - E psi|| / ||psi||` over interior nodes (trapezoidal L2 norms).
pub fn residual_norm(op: &TridiagonalOperator, psi: &SampledFunction, energy: f64) -> Result<f64> {
    if psi.grid() != op.grid() {
        return Err(SipsError::GridMismatch);
    }
    let n = op.dim();
    let interior = &psi.values()[1..=n];
    let r: Vec<f64> = op.apply(interior).iter().zip(interior).map(|(t, v)| t - energy * v).collect();
    let h = op.grid.spacing();
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(SipsError::NonFinite("zero trial function".into()));
    }
    Ok((h * r.iter().map(|x| x * x).sum::<f64>()).sqrt() / norm)
}

/// Lowest `k` oracle eigenvalues of `H-` for a catalog model.
pub fn oracle_spectrum(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    grid: &Grid,
    k: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    lowest_eigenvalues(&hamiltonian_minus(model, p, grid)?, k, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelComparison {
    pub n: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub levels: Vec<LevelComparison>,
    pub tol: f64,
    pub passed: bool,
    pub worst_level: Option<usize>,
    pub max_abs_diff: f64,
}

/// Level-by-level comparison over the common prefix of both spectra.
pub fn compare_spectra(analytic: &Spectrum, numeric: &[f64], tol: f64) -> SpectrumComparison {
    let levels: Vec<LevelComparison> = analytic
        .energies
        .iter()
        .zip(numeric)
        .enumerate()
        .map(|(n, (&a, &b))| LevelComparison { n, analytic: a, numeric: b, abs_diff: (a - b).abs() })
        .collect();
    let worst = levels.iter().max_by(|a, b| a.abs_diff.total_cmp(&b.abs_diff));
    let max_abs_diff = worst.map_or(0.0, |l| l.abs_diff);
    SpectrumComparison {
        passed: !levels.is_empty() && max_abs_diff < tol,
        worst_level: worst.map(|l| l.n),
        max_abs_diff,
        tol,
        levels,
    }
}

/// Largest pointwise gap between two functions on the same grid.
pub fn max_pointwise_gap(a: &SampledFunction, b: &SampledFunction) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(SipsError::GridMismatch);
    }
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
