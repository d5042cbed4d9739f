use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sips_core::algebra::{algebra_spectrum, AlgebraReport, PotentialAlgebra, TestFunction};
use sips_core::oracle::{compare_spectra, hamiltonian_minus, oracle_spectrum, residual_norm, SpectrumComparison};
use sips_core::susy::{
    excited_state_by_ladder, node_count, spectrum_by_shape_invariance, verify_shape_invariance,
    ShapeInvarianceReport, DEFAULT_NODE_THRESHOLD,
};
use sips_core::unireps::{
    classify, enumerate_multiplet, region_of, Classification, Multiplet, RepLabel,
};
use sips_core::{list_models, Grid, ParameterPoint, Spectrum};

use crate::config::{parse_range, Format, Route, RunConfig, DEFAULT_LEVELS};
use crate::error::CliError;
use crate::output::emit;
use crate::RepClassArg;

/// Largest disagreement tolerated between the two spectrum routes.
const ROUTE_AGREEMENT: f64 = 1e-9;
/// Relative bound on the shape-invariance residual in `verify`.
const IDENTITY_TOL: f64 = 1e-9;
const EQ5_TOL: f64 = 1e-12;
const CLOSURE_TOL: f64 = 1e-4;
const ORACLE_BISECTION_TOL: f64 = 1e-10;

pub struct Outcome {
    pub code: u8,
}

impl Outcome {
    fn ok() -> Self {
        Outcome { code: 0 }
    }

    fn from_pass(passed: bool) -> Self {
        Outcome { code: if passed { 0 } else { 1 } }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn no_csv(what: &str) -> CliError {
    CliError::usage(format!("csv output is not available for `{what}`"))
}

pub fn list(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let models = list_models();
    let text = match cfg.format_or(Format::Text) {
        Format::Json => json(&models)?,
        Format::Csv => return Err(no_csv("list")),
        Format::Text => {
            let mut s = format!("{:<14} {:<8} {:>6}  {:<24} {}\n", "id", "params", "delta", "W(x)", "valid for");
            for m in &models {
                writeln!(
                    s,
                    "{:<14} {:<8} {:>6}  {:<24} {}",
                    m.id,
                    m.param_names.join(","),
                    m.delta,
                    m.superpotential,
                    m.validity
                )
                .unwrap();
            }
            s
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(Outcome::ok())
}

fn spectrum_text(label: &str, s: &Spectrum) -> String {
    let mut out = format!("{} ({}) via {label}\n", s.model, s.p0);
    for (n, e) in s.energies.iter().enumerate() {
        writeln!(out, "  E_{n} = {e}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct BothRoutes<'a> {
    shape_invariance: &'a Spectrum,
    algebra: &'a Spectrum,
    max_discrepancy: f64,
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let levels = cfg.levels.unwrap_or(DEFAULT_LEVELS);
    if levels == 0 {
        return Err(CliError::usage("--levels must be at least 1"));
    }
    let format = cfg.format_or(Format::Text);
    if format == Format::Csv {
        return Err(no_csv("spectrum"));
    }
    let algebra_route = |p: &ParameterPoint| {
        let m = cfg.m.unwrap_or(p.a + 0.5);
        algebra_spectrum(&model, m, &p.aux, levels).map_err(CliError::from)
    };
    let (text, code) = match cfg.route {
        Route::Shape => {
            let p = cfg.parameter_point(&model)?;
            let s = spectrum_by_shape_invariance(&model, &p, levels)?;
            let text = if format == Format::Json { json(&s)? } else { spectrum_text("shape invariance", &s) };
            (text, 0)
        }
        Route::Algebra => {
            let p = if cfg.m.is_some() { algebra_point(cfg, &model)? } else { cfg.parameter_point(&model)? };
            let s = algebra_route(&p)?;
            let text = if format == Format::Json { json(&s)? } else { spectrum_text("SO(2,1) algebra", &s) };
            (text, 0)
        }
        Route::Both => {
            let p = cfg.parameter_point(&model)?;
            if let Some(m) = cfg.m {
                if (m - 0.5 - p.a).abs() > 0.0 {
                    return Err(CliError::usage(format!("--m {m} does not match a = {}", p.a)));
                }
            }
            let si = spectrum_by_shape_invariance(&model, &p, levels)?;
            let alg = algebra_route(&p)?;
            let gap = if si.len() == alg.len() { si.max_discrepancy(&alg) } else { f64::INFINITY };
            let text = if format == Format::Json {
                json(&BothRoutes { shape_invariance: &si, algebra: &alg, max_discrepancy: gap })?
            } else {
                format!(
                    "{}{}max discrepancy: {gap:e}\n",
                    spectrum_text("shape invariance", &si),
                    spectrum_text("SO(2,1) algebra", &alg)
                )
            };
            (text, if gap <= ROUTE_AGREEMENT { 0 } else { 1 })
        }
    };
    emit(&text, cfg.out.as_deref())?;
    if code != 0 {
        eprintln!("sips: routes disagree beyond {ROUTE_AGREEMENT:e}");
    }
    Ok(Outcome { code })
}

/// Auxiliary constants from `--params` with `a = m - 1/2`.
fn algebra_point(cfg: &RunConfig, model: &sips_core::SuperpotentialModel) -> Result<ParameterPoint, CliError> {
    let aux = cfg.aux_params(model)?;
    let m = cfg.m.expect("caller checked --m");
    Ok(ParameterPoint { a: m - 0.5, aux })
}

#[derive(Serialize)]
struct VerifyReport {
    model: String,
    params: ParameterPoint,
    grid: Grid,
    tol: f64,
    shape_invariance: ShapeInvarianceReport,
    identity_passed: bool,
    spectrum: Spectrum,
    oracle: Vec<f64>,
    comparison: SpectrumComparison,
    passed: bool,
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let p = cfg.parameter_point(&model)?;
    let tol = cfg.tol_or_default();
    let bound = model.max_bound_states(&p)?;
    let levels = cfg.levels.unwrap_or(DEFAULT_LEVELS).min(bound);
    if levels == 0 {
        return Err(CliError::usage("--levels must be at least 1"));
    }
    let k_max = match model.continuum_edge(&p) {
        Some(_) => bound - 1,
        None => levels,
    };
    let identity = verify_shape_invariance(&model, &p, &cfg.grid, k_max)?;
    let identity_passed = identity.max_relative_residual() < IDENTITY_TOL;
    let spectrum = spectrum_by_shape_invariance(&model, &p, levels)?;
    let oracle = oracle_spectrum(&model, &p, &cfg.grid, spectrum.len(), ORACLE_BISECTION_TOL)?;
    let comparison = compare_spectra(&spectrum, &oracle, tol);
    let passed = identity_passed && comparison.passed;
    let report = VerifyReport {
        model: model.id().to_owned(),
        params: p,
        grid: cfg.grid,
        tol,
        shape_invariance: identity,
        identity_passed,
        spectrum,
        oracle,
        comparison,
        passed,
    };
    let text = match cfg.format_or(Format::Text) {
        Format::Json => json(&report)?,
        Format::Csv => return Err(no_csv("verify")),
        Format::Text => {
            let mut s = format!("{} ({}) on grid {}\n", report.model, report.params, report.grid);
            writeln!(
                s,
                "shape invariance: max residual {:.3e} (relative {:.3e}) {}",
                report.shape_invariance.max_residual(),
                report.shape_invariance.max_relative_residual(),
                if identity_passed { "ok" } else { "FAIL" }
            )
            .unwrap();
            for l in &report.comparison.levels {
                writeln!(s, "  n={} analytic {} oracle {:.9} |dE| {:.3e}", l.n, l.analytic, l.numeric, l.abs_diff).unwrap();
            }
            writeln!(
                s,
                "max |dE| {:.3e} vs tol {:e}: {}",
                report.comparison.max_abs_diff,
                tol,
                if report.comparison.passed { "ok" } else { "FAIL" }
            )
            .unwrap();
            writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(Outcome::from_pass(passed))
}

#[derive(Serialize)]
struct WavefunctionRecord {
    model: String,
    params: ParameterPoint,
    n: usize,
    energy: f64,
    node_count: usize,
    oracle_residual: f64,
    grid: Grid,
    values: Vec<f64>,
}

pub fn wavefunction(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let p = cfg.parameter_point(&model)?;
    let n = cfg.n.ok_or_else(|| CliError::usage("--n is required"))?;
    let psi = excited_state_by_ladder(&model, &p, n, &cfg.grid)?;
    let energy = model.closed_form_energy(&p, n)?;
    let op = hamiltonian_minus(&model, &p, &cfg.grid)?;
    let record = WavefunctionRecord {
        model: model.id().to_owned(),
        n,
        energy,
        node_count: node_count(&psi, DEFAULT_NODE_THRESHOLD),
        oracle_residual: residual_norm(&op, &psi, energy)?,
        grid: cfg.grid,
        values: psi.into_values(),
        params: p,
    };
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&record)?,
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "# model={}", record.model).unwrap();
            writeln!(s, "# params={}", record.params).unwrap();
            writeln!(s, "# n={}", record.n).unwrap();
            writeln!(s, "# energy={}", record.energy).unwrap();
            writeln!(s, "# node_count={}", record.node_count).unwrap();
            writeln!(s, "# oracle_residual={:e}", record.oracle_residual).unwrap();
            writeln!(s, "# grid={}", record.grid).unwrap();
            s.push_str("x,psi\n");
            for (x, v) in record.grid.points().zip(&record.values) {
                writeln!(s, "{x},{v:e}").unwrap();
            }
            s
        }
        Format::Text => format!(
            "{} ({}) psi_{}: E = {}, nodes = {}, oracle residual = {:.3e}\n",
            record.model, record.params, record.n, record.energy, record.node_count, record.oracle_residual
        ),
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(Outcome::ok())
}

pub fn algebra_check(cfg: &RunConfig, functions: &[TestFunction]) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let m = cfg.m.ok_or_else(|| CliError::usage("--m is required"))?;
    let aux = cfg.aux_params(&model)?;
    let algebra = PotentialAlgebra::new(model, aux)?;
    let budget = cfg.tol.unwrap_or(CLOSURE_TOL);
    let reports: Vec<AlgebraReport> = functions
        .iter()
        .map(|tf| algebra.report(m, *tf, &cfg.grid))
        .collect::<Result<_, _>>()?;
    let passed = reports.iter().all(|r| {
        let res = &r.residuals;
        res.eq5 < EQ5_TOL && res.eq6 < budget && res.eq7 < budget && res.eq8 < budget
    });
    let text = match cfg.format_or(Format::Json) {
        Format::Json if reports.len() == 1 => json(&reports[0])?,
        Format::Json => json(&reports)?,
        Format::Csv => return Err(no_csv("algebra check")),
        Format::Text => {
            let mut s = format!("{} sector m = {m}\n", algebra.model().id());
            writeln!(s, "{:<18} {:>10} {:>10} {:>10} {:>10}", "test function", "eq5", "eq6", "eq7", "eq8").unwrap();
            for r in &reports {
                let res = &r.residuals;
                writeln!(
                    s,
                    "{:<18} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
                    r.test_function, res.eq5, res.eq6, res.eq7, res.eq8
                )
                .unwrap();
            }
            writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(Outcome::from_pass(passed))
}

pub fn reps_classify(j: f64, m0: f64, beta: Option<f64>, format: Option<Format>) -> Result<Outcome, CliError> {
    let result = match beta {
        Some(beta) => match RepLabel::principal(beta, m0) {
            Ok(rep) => Classification { rep: Some(rep), note: "principal series, j = -1/2 + i beta".into() },
            Err(e) => Classification { rep: None, note: e.to_string() },
        },
        None => classify(j, m0),
    };
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&result)?,
        Format::Csv => return Err(no_csv("reps classify")),
        Format::Text => match &result.rep {
            Some(rep) => format!("{} (j = {}, m0 = {}): {}\n", rep.class, rep.j, rep.m0, result.note),
            None => format!("invalid: {}\n", result.note),
        },
    };
    emit(&text, None)?;
    Ok(Outcome::ok())
}

#[derive(Serialize)]
struct MultipletRecord {
    #[serde(flatten)]
    multiplet: Multiplet,
    /// `(raise, lower)` per weight.
    coefficients: Vec<(f64, f64)>,
}

pub fn reps_enumerate(
    class: RepClassArg,
    j: Option<f64>,
    m0: Option<f64>,
    beta: Option<f64>,
    count: usize,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::usage(format!("--{name} is required for {class:?}")));
    let rep = match class {
        RepClassArg::DPlus => RepLabel::d_plus(need(j, "j")?)?,
        RepClassArg::DMinus => RepLabel::d_minus(need(j, "j")?)?,
        RepClassArg::DS => RepLabel::supplementary(need(j, "j")?, need(m0, "m0")?)?,
        RepClassArg::DP => RepLabel::principal(need(beta, "beta")?, need(m0, "m0")?)?,
    };
    let multiplet = enumerate_multiplet(&rep, count)?;
    let coefficients = multiplet.coefficients()?;
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&MultipletRecord { multiplet, coefficients })?,
        Format::Csv => return Err(no_csv("reps enumerate")),
        Format::Text => {
            let mut s = format!("{} j = {} casimir = {}\n", rep.class, rep.j, multiplet.casimir);
            for (m, (up, down)) in multiplet.m_values.iter().zip(&coefficients) {
                writeln!(s, "  m = {m:<8} raise {up:.6} lower {down:.6}").unwrap();
            }
            s
        }
    };
    emit(&text, None)?;
    Ok(Outcome::ok())
}

pub fn reps_region_grid(j_range: &str, m_range: &str, out: Option<&Path>) -> Result<Outcome, CliError> {
    let js = parse_range(j_range)?;
    let ms = parse_range(m_range)?;
    let mut s = String::from("j,m,region\n");
    for &j in &js {
        for &m in &ms {
            writeln!(s, "{j},{m},{}", region_of(j, m).as_str()).unwrap();
        }
    }
    emit(&s, out)?;
    Ok(Outcome::ok())
}
