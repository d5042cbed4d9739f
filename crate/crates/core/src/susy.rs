//! SUSY-QM machinery for shape-invariant potentials.
//!
//! The spectrum follows from the remainders alone, `E_n = sum_{k<n} R(a_k)`
//! with `a_k = a_0 + k*delta`. Eigenfunctions come from the ground state
//! `psi_0 ~ exp(-∫W)` of the `n`-th partner, lifted by the chain
//! `A+(a_0) A+(a_1) ... A+(a_{n-1})`.

use serde::{Deserialize, Serialize};

use crate::catalog::{ParameterPoint, SuperpotentialModel};
use crate::error::{Result, SipsError};
use crate::grid::{Grid, SampledFunction};
use crate::stencil;

pub const DEFAULT_NODE_THRESHOLD: f64 = 1e-8;

/// Bound-state energies of `H-` for one family member, with the parameter
/// point of each rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub model: String,
    pub p0: ParameterPoint,
    pub energies: Vec<f64>,
    pub rungs: Vec<ParameterPoint>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Largest level-by-level absolute difference over the common prefix.
    pub fn max_discrepancy(&self, other: &Spectrum) -> f64 {
        self.energies
            .iter()
            .zip(&other.energies)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `p` with `a = a0 + k*delta`; auxiliary constants carried over.
pub fn shift_params(model: &SuperpotentialModel, p0: &ParameterPoint, k: usize) -> ParameterPoint {
    p0.with_a(p0.a + k as f64 * model.delta())
}

pub fn spectrum_by_shape_invariance(
    model: &SuperpotentialModel,
    p0: &ParameterPoint,
    n_max: usize,
) -> Result<Spectrum> {
    let levels = n_max.min(model.max_bound_states(p0)?);
    let rungs: Vec<ParameterPoint> = (0..levels).map(|k| shift_params(model, p0, k)).collect();
    let energies = rungs
        .iter()
        .scan(0.0, |acc, p| {
            let e = *acc;
            *acc += model.remainder(p);
            Some(e)
        })
        .collect();
    Ok(Spectrum { model: model.id().to_owned(), p0: p0.clone(), energies, rungs })
}

/// Pointwise check of `V+(x, a_k) = V-(x, a_{k+1}) + R(a_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeInvarianceReport {
    pub model: String,
    pub p0: ParameterPoint,
    /// Max absolute residual over interior grid points, one entry per `k`.
    pub residuals: Vec<f64>,
    /// Max `|V+(x, a_k)|` over the same points, for relative comparisons.
    pub scales: Vec<f64>,
}

impl ShapeInvarianceReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.residuals
            .iter()
            .zip(&self.scales)
            .map(|(r, s)| r / s.max(1.0))
            .fold(0.0, f64::max)
    }
}

pub fn verify_shape_invariance(
    model: &SuperpotentialModel,
    p0: &ParameterPoint,
    grid: &Grid,
    k_max: usize,
) -> Result<ShapeInvarianceReport> {
    let rungs: Vec<ParameterPoint> = (0..=k_max).map(|k| shift_params(model, p0, k)).collect();
    for p in &rungs {
        model.validate(p)?;
    }
    let interior = 1..grid.n_points() - 1;
    let mut residuals = Vec::with_capacity(k_max);
    let mut scales = Vec::with_capacity(k_max);
    for pair in rungs.windows(2) {
        let (pk, pk1) = (&pair[0], &pair[1]);
        let r = model.remainder(pk);
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for i in interior.clone() {
            let x = grid.x(i);
            let v_plus = model.v_plus_unchecked(x, pk);
            worst = worst.max((v_plus - model.v_minus_unchecked(x, pk1) - r).abs());
            scale = scale.max(v_plus.abs());
        }
        residuals.push(worst);
        scales.push(scale);
    }
    Ok(ShapeInvarianceReport { model: model.id().to_owned(), p0: p0.clone(), residuals, scales })
}

/// Cumulative integral of uniformly sampled `f` measured from node `start`,
/// by composite Simpson on node pairs marching outward in both directions.
fn cumulative_simpson_from(f: &[f64], h: f64, start: usize) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    // one-interval quadratic rule seeds the odd offsets
    let single = |a: f64, b: f64, c: f64| h / 12.0 * (5.0 * a + 8.0 * b - c);
    let pair = |a: f64, b: f64, c: f64| h / 3.0 * (a + 4.0 * b + c);

    if start + 2 < n {
        out[start + 1] = single(f[start], f[start + 1], f[start + 2]);
    } else if start + 1 < n {
        out[start + 1] = single(f[start + 1], f[start], f[start - 1]);
    }
    for i in start + 2..n {
        out[i] = out[i - 2] + pair(f[i - 2], f[i - 1], f[i]);
    }
    if start >= 2 {
        out[start - 1] = -single(f[start], f[start - 1], f[start - 2]);
    } else if start == 1 {
        out[0] = -single(f[0], f[1], f[2]);
    }
    for i in (0..start.saturating_sub(1)).rev() {
        out[i] = out[i + 2] - pair(f[i], f[i + 1], f[i + 2]);
    }
    out
}

/// Normalized `exp(-∫_{x_ref}^x W)`. The exponent is accumulated in log
/// space and shifted by its maximum before exponentiation; `x_ref` is snapped
/// to the nearest node and only fixes the (normalized-away) scale.
pub fn ground_state(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    grid: &Grid,
    x_ref: f64,
) -> Result<SampledFunction> {
    model.validate(p)?;
    let w: Vec<f64> = grid.points().map(|x| model.w_unchecked(x, p)).collect();
    let integral = cumulative_simpson_from(&w, grid.spacing(), grid.nearest_index(x_ref));
    let peak = integral.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
    if !peak.is_finite() {
        return Err(SipsError::NonFinite("ground-state exponent".into()));
    }
    let values = integral.iter().map(|v| (-v - peak).exp()).collect();
    let psi = SampledFunction::new(*grid, values)?;
    if !psi.norm().is_finite() {
        return Err(SipsError::NonFinite("ground-state norm".into()));
    }
    psi.normalized()
}

/// `A+ f = -f' + W f`, derivative by five-point stencils.
pub fn apply_a_plus(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    model.validate(p)?;
    let grid = *f.grid();
    let df = stencil::first_derivative(f.values(), grid.spacing())?;
    let values = f
        .values()
        .iter()
        .zip(&df)
        .zip(grid.points())
        .map(|((v, d), x)| -d + model.w_unchecked(x, p) * v)
        .collect();
    SampledFunction::new(grid, values)
}

/// `A f = f' + W f`, derivative by five-point stencils.
pub fn apply_a(
    model: &SuperpotentialModel,
    p: &ParameterPoint,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    model.validate(p)?;
    let grid = *f.grid();
    let df = stencil::first_derivative(f.values(), grid.spacing())?;
    let values = f
        .values()
        .iter()
        .zip(&df)
        .zip(grid.points())
        .map(|((v, d), x)| d + model.w_unchecked(x, p) * v)
        .collect();
    SampledFunction::new(grid, values)
}

/// Unit-norm `psi_n = A+(a_0) ... A+(a_{n-1}) psi_0(·, a_n)`.
pub fn excited_state_by_ladder(
    model: &SuperpotentialModel,
    p0: &ParameterPoint,
    n: usize,
    grid: &Grid,
) -> Result<SampledFunction> {
    let bound_states = model.max_bound_states(p0)?;
    if n >= bound_states {
        return Err(SipsError::LevelOutOfRange { level: n, bound_states });
    }
    if n > 0 {
        stencil::check_points(grid.n_points())?;
    }
    let mut psi = ground_state(model, &shift_params(model, p0, n), grid, 0.0)?;
    for k in (0..n).rev() {
        // renormalize each rung so the chain stays O(1)
        psi = apply_a_plus(model, &shift_params(model, p0, k), &psi)?.normalized()?;
    }
    Ok(psi.with_positive_lead())
}

/// Strict sign changes among samples above `threshold * max|f|`.
pub fn node_count(f: &SampledFunction, threshold: f64) -> usize {
    let cutoff = threshold * f.max_abs();
    let mut last_sign = 0.0;
    let mut count = 0;
    for &v in f.values() {
        if v.abs() <= cutoff {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            count += 1;
        }
        last_sign = s;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scarf_p(a: f64, b: f64) -> ParameterPoint {
        ParameterPoint::new(a).with("B", b)
    }

    #[test]
    fn parameter_shifts() {
        let scarf = SuperpotentialModel::scarf();
        assert_eq!(shift_params(&scarf, &scarf_p(3.0, 1.0), 1), scarf_p(2.0, 1.0));
        assert_eq!(shift_params(&scarf, &scarf_p(3.0, 1.0), 0), scarf_p(3.0, 1.0));
        let osc = SuperpotentialModel::oscillator();
        assert_eq!(shift_params(&osc, &ParameterPoint::new(1.0), 7).a, 1.0);
    }

    #[test]
    fn recursion_spectra() {
        let scarf = SuperpotentialModel::scarf();
        let s = spectrum_by_shape_invariance(&scarf, &scarf_p(3.0, 1.0), 3).unwrap();
        assert_eq!(s.energies, vec![0.0, 5.0, 8.0]);
        assert_eq!(s.rungs.iter().map(|p| p.a).collect::<Vec<_>>(), vec![3.0, 2.0, 1.0]);
        // truncated at the bound-state count
        let s = spectrum_by_shape_invariance(&scarf, &scarf_p(3.0, 1.0), 10).unwrap();
        assert_eq!(s.len(), 3);
        let osc = SuperpotentialModel::oscillator();
        let s = spectrum_by_shape_invariance(&osc, &ParameterPoint::new(1.0), 4).unwrap();
        assert_eq!(s.energies, vec![0.0, 2.0, 4.0, 6.0]);
        assert!(spectrum_by_shape_invariance(&scarf, &scarf_p(-1.0, 0.0), 3).is_err());
    }

    #[test]
    fn recursion_matches_closed_form() {
        let cases = [
            (SuperpotentialModel::scarf(), vec![scarf_p(3.0, 1.0), scarf_p(5.5, -2.0), scarf_p(0.7, 40.0)]),
            (
                SuperpotentialModel::poschl_teller(),
                vec![ParameterPoint::new(2.0), ParameterPoint::new(4.25), ParameterPoint::new(9.0)],
            ),
            (SuperpotentialModel::morse(), vec![scarf_p(3.0, 1.0), scarf_p(6.2, 0.5), scarf_p(1.5, 3.0)]),
            (
                SuperpotentialModel::oscillator(),
                vec![ParameterPoint::new(1.0), ParameterPoint::new(0.0), ParameterPoint::new(-3.0)],
            ),
        ];
        for (model, points) in cases {
            for p in points {
                let s = spectrum_by_shape_invariance(&model, &p, 64).unwrap();
                for (n, e) in s.energies.iter().enumerate() {
                    let exact = model.closed_form_energy(&p, n).unwrap();
                    assert!((e - exact).abs() < 1e-12, "{} {p} n={n}", model.id());
                }
            }
        }
    }

    #[test]
    fn shape_invariance_residuals() {
        let scarf = SuperpotentialModel::scarf();
        let grid = Grid::new(-20.0, 20.0, 2001).unwrap();
        let report = verify_shape_invariance(&scarf, &scarf_p(3.0, 1.0), &grid, 2).unwrap();
        assert_eq!(report.residuals.len(), 2);
        assert!(report.max_residual() < 1e-10);

        let osc = SuperpotentialModel::oscillator();
        let report = verify_shape_invariance(&osc, &ParameterPoint::new(1.0), &grid, 3).unwrap();
        assert!(report.max_residual() < 1e-12);

        let wrong = SuperpotentialModel::scarf().with_delta(1.0);
        let report = verify_shape_invariance(&wrong, &scarf_p(3.0, 1.0), &grid, 1).unwrap();
        assert!(report.max_residual() > 0.5);

        // a_3 = 0 is outside the valid range
        assert!(verify_shape_invariance(&scarf, &scarf_p(3.0, 1.0), &grid, 3).is_err());
    }

    #[test]
    fn cumulative_simpson_integrates_quadratics_exactly() {
        let h = 0.25;
        let f: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(2) - 1.0).collect();
        let antiderivative = |x: f64| x.powi(3) / 3.0 - x;
        for start in [0, 1, 3, 4, 9, 10] {
            let out = cumulative_simpson_from(&f, h, start);
            let x0 = start as f64 * h;
            for (i, v) in out.iter().enumerate() {
                let x = i as f64 * h;
                assert!((v - (antiderivative(x) - antiderivative(x0))).abs() < 1e-12, "start {start} i {i}");
            }
        }
    }

    #[test]
    fn oscillator_ground_state_is_gaussian() {
        let osc = SuperpotentialModel::oscillator();
        let grid = Grid::reference();
        let psi = ground_state(&osc, &ParameterPoint::new(1.0), &grid, 0.0).unwrap();
        let v = psi.values();
        assert!((v[2100] / v[2000] - (-0.5f64).exp()).abs() < 1e-12);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert_eq!(node_count(&psi, DEFAULT_NODE_THRESHOLD), 0);
    }

    #[test]
    fn scarf_ground_state_is_sech_cubed() {
        let scarf = SuperpotentialModel::scarf();
        let grid = Grid::reference();
        let psi = ground_state(&scarf, &scarf_p(3.0, 0.0), &grid, 0.0).unwrap();
        let exact = SampledFunction::from_fn(grid, |x| x.cosh().powi(-3)).unwrap().normalized().unwrap();
        for (i, (a, b)) in psi.values().iter().zip(exact.values()).enumerate() {
            assert!((a - b).abs() < 1e-8, "i={i}");
            assert!((psi.values()[i] - psi.values()[4000 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_point_only_rescales() {
        let scarf = SuperpotentialModel::scarf();
        let grid = Grid::reference();
        let p = scarf_p(2.5, 1.7);
        let a = ground_state(&scarf, &p, &grid, 0.0).unwrap();
        for x_ref in [1.3, -7.0, 19.99] {
            let b = ground_state(&scarf, &p, &grid, x_ref).unwrap();
            let diff = a.values().iter().zip(b.values()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-8, "x_ref {x_ref}: {diff}");
        }
    }

    #[test]
    fn large_b_ground_state_stays_finite() {
        let scarf = SuperpotentialModel::scarf();
        for b in [-80.0, 80.0] {
            let psi = ground_state(&scarf, &scarf_p(3.0, b), &Grid::reference(), 0.0).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            assert!(psi.values().iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn a_plus_raises_oscillator_ground_state() {
        let osc = SuperpotentialModel::oscillator();
        let p = ParameterPoint::new(1.0);
        let grid = Grid::reference();
        let psi0 = SampledFunction::from_fn(grid, |x| (-x * x / 2.0).exp()).unwrap();
        let raised = apply_a_plus(&osc, &p, &psi0).unwrap();
        for (x, v) in grid.points().zip(raised.values()) {
            assert!((v - 2.0 * x * (-x * x / 2.0).exp()).abs() < 1e-8);
        }
        let lowered = apply_a(&osc, &p, &psi0).unwrap();
        assert!(lowered.max_abs() < 1e-6 * psi0.max_abs());
    }

    #[test]
    fn a_plus_is_linear_at_zero() {
        let scarf = SuperpotentialModel::scarf();
        let zero = SampledFunction::zeros(Grid::reference());
        assert_eq!(apply_a_plus(&scarf, &scarf_p(3.0, 1.0), &zero).unwrap(), zero);
    }

    #[test]
    fn a_plus_needs_seven_points() {
        let grid = Grid::new(-1.0, 1.0, 6).unwrap();
        let f = SampledFunction::zeros(grid);
        assert!(matches!(
            apply_a_plus(&SuperpotentialModel::oscillator(), &ParameterPoint::new(1.0), &f),
            Err(SipsError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn ladder_states_and_nodes() {
        let scarf = SuperpotentialModel::scarf();
        let grid = Grid::reference();
        let p = scarf_p(3.0, 1.0);
        assert_eq!(
            excited_state_by_ladder(&scarf, &p, 0, &grid).unwrap(),
            ground_state(&scarf, &p, &grid, 0.0).unwrap()
        );
        for n in 0..3 {
            let psi = excited_state_by_ladder(&scarf, &p, n, &grid).unwrap();
            assert_eq!(node_count(&psi, DEFAULT_NODE_THRESHOLD), n);
        }
        assert!(matches!(
            excited_state_by_ladder(&scarf, &p, 3, &grid),
            Err(SipsError::LevelOutOfRange { level: 3, bound_states: 3 })
        ));

        // Hermite H2 ~ 4x^2 - 2
        let osc = SuperpotentialModel::oscillator();
        let psi2 = excited_state_by_ladder(&osc, &ParameterPoint::new(1.0), 2, &grid).unwrap();
        assert_eq!(node_count(&psi2, DEFAULT_NODE_THRESHOLD), 2);
        let exact = SampledFunction::from_fn(grid, |x| (4.0 * x * x - 2.0) * (-x * x / 2.0).exp())
            .unwrap()
            .normalized()
            .unwrap()
            .with_positive_lead();
        for (a, b) in psi2.values().iter().zip(exact.values()) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn node_counting_ignores_small_values() {
        let grid = Grid::new(0.0, 6.0, 7).unwrap();
        let f = SampledFunction::new(grid, vec![1.0, -1e-12, 1.0, -1.0, 0.0, -2.0, 3.0]).unwrap();
        assert_eq!(node_count(&f, DEFAULT_NODE_THRESHOLD), 2);
        assert_eq!(node_count(&SampledFunction::zeros(grid), DEFAULT_NODE_THRESHOLD), 0);
    }
}
