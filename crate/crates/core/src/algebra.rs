//! Potential algebra realized on Fourier sectors.
//!
//! A function of `(x, phi)` in sector `e^{i m phi}` is stored as its profile
//! in `x` together with `m`. `J3` multiplies by `m`; `J±` shift the sector
//! by one and act on the profile as `±d/dx - W(x, a = m ± 1/2)`. Closure
//! `[J+, J-] = -R(J3 + 1/2)` is exactly the shape-invariance condition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{ParameterPoint, SuperpotentialModel};
use crate::error::{Result, SipsError};
use crate::grid::{trapezoid_norm, Grid, SampledFunction};
use crate::stencil;
use crate::susy::{shift_params, Spectrum};

/// Width kept clear of the walls by commutator test functions.
pub const BOUNDARY_MARGIN: f64 = 2.0;
pub const BOUNDARY_LEAK_LIMIT: f64 = 1e-10;
/// Nodes skipped at each end when measuring composed-operator residuals.
const EDGE_SKIP: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SectorFunction {
    pub m: f64,
    pub f: SampledFunction,
}

impl SectorFunction {
    pub fn new(m: f64, f: SampledFunction) -> Self {
        Self { m, f }
    }
}

pub fn apply_j3(s: &SectorFunction) -> SectorFunction {
    SectorFunction::new(s.m, s.f.scaled(s.m))
}

/// Profiles used for the closure checks; all negligible near `|x| = 18`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Gaussian,
    OddGaussian,
    ShiftedGaussian,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] =
        [TestFunction::Gaussian, TestFunction::OddGaussian, TestFunction::ShiftedGaussian];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Gaussian => "exp(-x^2)",
            TestFunction::OddGaussian => "x*exp(-x^2)",
            TestFunction::ShiftedGaussian => "exp(-(x-1)^2/2)",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            TestFunction::Gaussian => (-x * x).exp(),
            TestFunction::OddGaussian => x * (-x * x).exp(),
            TestFunction::ShiftedGaussian => (-(x - 1.0) * (x - 1.0) / 2.0).exp(),
        }
    }

    pub fn sample(self, grid: &Grid) -> Result<SampledFunction> {
        SampledFunction::from_fn(*grid, |x| self.eval(x))
    }
}

/// Residuals of the algebra relations on one sector and test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraResiduals {
    /// `[J3, J±] = ±J±`
    pub eq5: f64,
    /// `J+J-` against `H-` at `a = m - 1/2`
    pub eq6: f64,
    /// `J-J+` against `H+` at `a = m + 1/2`
    pub eq7: f64,
    /// `[J+, J-] = -R(m + 1/2)`
    pub eq8: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub model: String,
    pub m: f64,
    pub test_function: String,
    pub residuals: AlgebraResiduals,
}

/// `J3`, `J±` for one model family with its auxiliary constants fixed.
#[derive(Debug, Clone)]
pub struct PotentialAlgebra {
    model: SuperpotentialModel,
    aux: BTreeMap<String, f64>,
}

impl PotentialAlgebra {
    pub fn new(model: SuperpotentialModel, aux: BTreeMap<String, f64>) -> Result<Self> {
        // the sector parameter is free; only the auxiliary constants are checked
        model.validate(&ParameterPoint { a: 1.0, aux: aux.clone() })?;
        Ok(Self { model, aux })
    }

    pub fn model(&self) -> &SuperpotentialModel {
        &self.model
    }

    pub fn point(&self, a: f64) -> ParameterPoint {
        ParameterPoint { a, aux: self.aux.clone() }
    }

    fn ladder(&self, s: &SectorFunction, sign: f64) -> Result<SectorFunction> {
        let grid = *s.f.grid();
        let p = self.point(s.m + 0.5 * sign);
        let df = stencil::first_derivative(s.f.values(), grid.spacing())?;
        let values = s
            .f
            .values()
            .iter()
            .zip(&df)
            .zip(grid.points())
            .map(|((v, d), x)| sign * d - self.model.w_unchecked(x, &p) * v)
            .collect();
        Ok(SectorFunction::new(s.m + sign, SampledFunction::new(grid, values)?))
    }

    /// Sector `m -> m+1`, profile `(d/dx - W(x, m + 1/2)) f`.
    pub fn apply_j_plus(&self, s: &SectorFunction) -> Result<SectorFunction> {
        self.ladder(s, 1.0)
    }

    /// Sector `m -> m-1`, profile `(-d/dx - W(x, m - 1/2)) f`.
    pub fn apply_j_minus(&self, s: &SectorFunction) -> Result<SectorFunction> {
        self.ladder(s, -1.0)
    }

    /// Worst of `||[J3, J±] f ∓ J± f|| / ||J± f||` over both signs.
    pub fn check_commutator_j3_jpm(&self, s: &SectorFunction) -> Result<f64> {
        let mut worst = 0.0f64;
        for sign in [1.0, -1.0] {
            let jf = self.ladder(s, sign)?;
            let j3_after = apply_j3(&jf);
            let j3_before = self.ladder(&apply_j3(s), sign)?;
            let h = s.f.grid().spacing();
            let r: Vec<f64> = j3_after
                .f
                .values()
                .iter()
                .zip(j3_before.f.values())
                .zip(jf.f.values())
                .map(|((a, b), j)| a - b - sign * j)
                .collect();
            let denom = jf.f.norm();
            if denom > 0.0 {
                worst = worst.max(trapezoid_norm(&r, h) / denom);
            }
        }
        Ok(worst)
    }

    fn boundary_leak(f: &SampledFunction) -> f64 {
        let g = f.grid();
        let outer: Vec<f64> = g
            .points()
            .zip(f.values())
            .map(|(x, v)| {
                if x < g.x_min() + BOUNDARY_MARGIN || x > g.x_max() - BOUNDARY_MARGIN {
                    *v
                } else {
                    0.0
                }
            })
            .collect();
        let total = f.norm();
        if total == 0.0 {
            0.0
        } else {
            trapezoid_norm(&outer, g.spacing()) / total
        }
    }

    fn interior_ratio(residual: &[f64], f: &SampledFunction) -> f64 {
        let n = residual.len();
        let h = f.grid().spacing();
        let inner = EDGE_SKIP..n - EDGE_SKIP;
        trapezoid_norm(&residual[inner.clone()], h) / trapezoid_norm(&f.values()[inner], h)
    }

    fn require_compact(&self, s: &SectorFunction) -> Result<()> {
        stencil::check_points(s.f.grid().n_points())?;
        if s.f.grid().n_points() < 2 * EDGE_SKIP + 2 {
            return Err(SipsError::GridTooCoarse {
                n_points: s.f.grid().n_points(),
                required: 2 * EDGE_SKIP + 2,
            });
        }
        let leak = Self::boundary_leak(&s.f);
        if leak > BOUNDARY_LEAK_LIMIT {
            return Err(SipsError::BoundaryContamination { leak });
        }
        Ok(())
    }

    /// `||([J+, J-] + R(m + 1/2)) f|| / ||f||` over interior nodes.
    pub fn check_commutator_jp_jm(&self, s: &SectorFunction) -> Result<f64> {
        self.require_compact(s)?;
        let jpjm = self.apply_j_plus(&self.apply_j_minus(s)?)?;
        let jmjp = self.apply_j_minus(&self.apply_j_plus(s)?)?;
        let r = self.model.remainder(&self.point(s.m + 0.5));
        let residual: Vec<f64> = jpjm
            .f
            .values()
            .iter()
            .zip(jmjp.f.values())
            .zip(s.f.values())
            .map(|((a, b), v)| a - b + r * v)
            .collect();
        Ok(Self::interior_ratio(&residual, &s.f))
    }

    fn hamiltonian_residual(&self, s: &SectorFunction, lower_first: bool) -> Result<f64> {
        self.require_compact(s)?;
        let grid = *s.f.grid();
        let composed = if lower_first {
            self.apply_j_plus(&self.apply_j_minus(s)?)?
        } else {
            self.apply_j_minus(&self.apply_j_plus(s)?)?
        };
        let d2 = stencil::second_derivative(s.f.values(), grid.spacing())?;
        let residual: Vec<f64> = grid
            .points()
            .zip(s.f.values())
            .zip(&d2)
            .zip(composed.f.values())
            .map(|(((x, v), dd), c)| {
                let potential = if lower_first {
                    self.model.v_minus_unchecked(x, &self.point(s.m - 0.5))
                } else {
                    self.model.v_plus_unchecked(x, &self.point(s.m + 0.5))
                };
                c - (-dd + potential * v)
            })
            .collect();
        Ok(Self::interior_ratio(&residual, &s.f))
    }

    /// `J+J-` on sector `m` against `-d²/dx² + V-(x, m - 1/2)`.
    pub fn check_product_jp_jm(&self, s: &SectorFunction) -> Result<f64> {
        self.hamiltonian_residual(s, true)
    }

    /// `J-J+` on sector `m` against `-d²/dx² + V+(x, m + 1/2)`.
    pub fn check_product_jm_jp(&self, s: &SectorFunction) -> Result<f64> {
        self.hamiltonian_residual(s, false)
    }

    pub fn report(&self, m: f64, test_function: TestFunction, grid: &Grid) -> Result<AlgebraReport> {
        let s = SectorFunction::new(m, test_function.sample(grid)?);
        Ok(AlgebraReport {
            model: self.model.id().to_owned(),
            m,
            test_function: test_function.name().to_owned(),
            residuals: AlgebraResiduals {
                eq5: self.check_commutator_j3_jpm(&s)?,
                eq6: self.check_product_jp_jm(&s)?,
                eq7: self.check_product_jm_jp(&s)?,
                eq8: self.check_commutator_jp_jm(&s)?,
            },
        })
    }
}

/// `E = m² - m - j(j+1)`.
pub fn energy_from_algebra(m: f64, j: f64) -> f64 {
    m * m - m - j * (j + 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct So21Diagnostic {
    pub model: String,
    pub is_so21: bool,
    pub delta: f64,
    /// `(a, R(a) - (2a - 1))` at each probe.
    pub probes: Vec<(f64, f64)>,
}

const SO21_PROBES: [f64; 5] = [0.5, 1.0, 2.5, 4.0, 7.25];

/// Whether `[J+, J-] = -2 J3`: unit downward step and `R(a) = 2a - 1`.
pub fn is_so21(model: &SuperpotentialModel) -> So21Diagnostic {
    let probes: Vec<(f64, f64)> = SO21_PROBES
        .iter()
        .map(|&a| (a, model.remainder(&ParameterPoint::new(a)) - (2.0 * a - 1.0)))
        .collect();
    let linear = probes.iter().all(|(_, r)| r.abs() < 1e-12);
    So21Diagnostic {
        model: model.id().to_owned(),
        is_so21: model.delta() == -1.0 && linear,
        delta: model.delta(),
        probes,
    }
}

/// Spectrum from the Casimir: `E_n = m² - m - j(j+1)` with `j = n - m`, for
/// the family member `a_0 = m - 1/2`.
pub fn algebra_spectrum(
    model: &SuperpotentialModel,
    m: f64,
    aux: &BTreeMap<String, f64>,
    n_max: usize,
) -> Result<Spectrum> {
    let diagnostic = is_so21(model);
    if !diagnostic.is_so21 {
        return Err(SipsError::NotSo21 {
            model: model.id().to_owned(),
            diagnostic: format!("delta = {}, R(a) - (2a - 1) probes {:?}", diagnostic.delta, diagnostic.probes),
        });
    }
    let p0 = ParameterPoint { a: m - 0.5, aux: aux.clone() };
    let levels = n_max.min(model.max_bound_states(&p0)?);
    let energies = (0..levels).map(|n| energy_from_algebra(m, n as f64 - m)).collect();
    let rungs = (0..levels).map(|k| shift_params(model, &p0, k)).collect();
    Ok(Spectrum { model: model.id().to_owned(), p0, energies, rungs })
}
