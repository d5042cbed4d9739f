//! Compiled-in catalog of shape-invariant superpotentials.
//!
//! Each entry supplies the superpotential `W(x; a, aux)` and its analytic
//! derivative, the parameter step `delta` applied on every ladder rung, the
//! remainder `R(a)` and the closed-form spectrum. Partner potentials are
//! `V∓ = W² ∓ W'`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SipsError};

/// Default number of levels reported for the (unbounded) oscillator.
pub const OSCILLATOR_LEVEL_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Scarf,
    PoschlTeller,
    Morse,
    Oscillator,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] =
        [ModelKind::Scarf, ModelKind::PoschlTeller, ModelKind::Morse, ModelKind::Oscillator];

    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Scarf => "scarf",
            ModelKind::PoschlTeller => "poschl_teller",
            ModelKind::Morse => "morse",
            ModelKind::Oscillator => "oscillator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    FullLine,
    HalfLine,
}

/// One member of a potential family: the shifting parameter `a` plus any
/// auxiliary constants (e.g. `B`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub a: f64,
    #[serde(default)]
    pub aux: BTreeMap<String, f64>,
}

impl ParameterPoint {
    pub fn new(a: f64) -> Self {
        Self { a, aux: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.aux.insert(name.to_owned(), value);
        self
    }

    pub fn aux(&self, name: &str) -> Option<f64> {
        self.aux.get(name).copied()
    }

    /// Same auxiliary constants, different `a`.
    pub fn with_a(&self, a: f64) -> Self {
        Self { a, aux: self.aux.clone() }
    }
}

impl fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}", self.a)?;
        for (k, v) in &self.aux {
            write!(f, ",{k}={v}")?;
        }
        Ok(())
    }
}

/// Serializable description of a catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub id: String,
    pub domain: Domain,
    pub param_names: Vec<String>,
    pub delta: f64,
    pub superpotential: String,
    pub remainder: String,
    pub energies: String,
    pub validity: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpotentialModel {
    kind: ModelKind,
    delta: f64,
    level_cap: usize,
}

impl SuperpotentialModel {
    pub fn new(kind: ModelKind) -> Self {
        let delta = match kind {
            ModelKind::Oscillator => 0.0,
            _ => -1.0,
        };
        Self { kind, delta, level_cap: OSCILLATOR_LEVEL_CAP }
    }

    pub fn scarf() -> Self {
        Self::new(ModelKind::Scarf)
    }

    pub fn poschl_teller() -> Self {
        Self::new(ModelKind::PoschlTeller)
    }

    pub fn morse() -> Self {
        Self::new(ModelKind::Morse)
    }

    pub fn oscillator() -> Self {
        Self::new(ModelKind::Oscillator)
    }

    pub fn by_id(id: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .map(Self::new)
            .ok_or_else(|| SipsError::UnknownModel(id.to_owned()))
    }

    /// Overrides the parameter step. Only meant for negative controls.
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Overrides the number of oscillator levels treated as bound.
    pub fn with_level_cap(mut self, cap: usize) -> Self {
        self.level_cap = cap;
        self
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    pub fn domain(&self) -> Domain {
        Domain::FullLine
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self.kind {
            ModelKind::Scarf | ModelKind::Morse => &["a", "B"],
            ModelKind::PoschlTeller | ModelKind::Oscillator => &["a"],
        }
    }

    pub fn info(&self) -> ModelInfo {
        let (w, r, e, valid) = match self.kind {
            ModelKind::Scarf => (
                "a*tanh(x) + B*sech(x)",
                "2a - 1",
                "a^2 - (a - n)^2",
                "a > 0, B real",
            ),
            ModelKind::PoschlTeller => ("a*tanh(x)", "2a - 1", "a^2 - (a - n)^2", "a > 0"),
            ModelKind::Morse => ("a - B*exp(-x)", "2a - 1", "a^2 - (a - n)^2", "a > 0, B > 0"),
            ModelKind::Oscillator => ("x", "2", "2n", "a is an inert label"),
        };
        ModelInfo {
            id: self.id().to_owned(),
            domain: self.domain(),
            param_names: self.param_names().iter().map(|s| s.to_string()).collect(),
            delta: self.delta,
            superpotential: w.to_owned(),
            remainder: r.to_owned(),
            energies: e.to_owned(),
            validity: valid.to_owned(),
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> SipsError {
        SipsError::InvalidParameter { model: self.id().to_owned(), reason: reason.into() }
    }

    /// Checks that `p` names exactly this model's parameters and lies in the
    /// region with at least one bound state.
    pub fn validate(&self, p: &ParameterPoint) -> Result<()> {
        let aux_names = &self.param_names()[1..];
        if let Some(extra) = p.aux.keys().find(|k| !aux_names.contains(&k.as_str())) {
            return Err(self.invalid(format!("unknown parameter `{extra}`")));
        }
        if let Some(missing) = aux_names.iter().find(|k| !p.aux.contains_key(**k)) {
            return Err(self.invalid(format!("missing parameter `{missing}`")));
        }
        if !p.a.is_finite() || p.aux.values().any(|v| !v.is_finite()) {
            return Err(self.invalid("parameters must be finite"));
        }
        match self.kind {
            ModelKind::Oscillator => Ok(()),
            ModelKind::Scarf | ModelKind::PoschlTeller if p.a <= 0.0 => {
                Err(self.invalid(format!("a = {} has no bound states (need a > 0)", p.a)))
            }
            ModelKind::Morse if p.a <= 0.0 => {
                Err(self.invalid(format!("a = {} has no bound states (need a > 0)", p.a)))
            }
            ModelKind::Morse if self.b(p) <= 0.0 => {
                Err(self.invalid(format!("B = {} must be positive", self.b(p))))
            }
            _ => Ok(()),
        }
    }

    pub fn param_valid(&self, p: &ParameterPoint) -> bool {
        self.validate(p).is_ok()
    }

    fn b(&self, p: &ParameterPoint) -> f64 {
        p.aux("B").unwrap_or(0.0)
    }

    /// `W(x; p)` without validation; callers validate once up front.
    pub fn w_unchecked(&self, x: f64, p: &ParameterPoint) -> f64 {
        match self.kind {
            ModelKind::Scarf => p.a * x.tanh() + self.b(p) / x.cosh(),
            ModelKind::PoschlTeller => p.a * x.tanh(),
            ModelKind::Morse => p.a - self.b(p) * (-x).exp(),
            ModelKind::Oscillator => x,
        }
    }

    /// Analytic `dW/dx` without validation.
    pub fn w_prime_unchecked(&self, x: f64, p: &ParameterPoint) -> f64 {
        match self.kind {
            ModelKind::Scarf => {
                let sech = 1.0 / x.cosh();
                p.a * sech * sech - self.b(p) * sech * x.tanh()
            }
            ModelKind::PoschlTeller => {
                let sech = 1.0 / x.cosh();
                p.a * sech * sech
            }
            ModelKind::Morse => self.b(p) * (-x).exp(),
            ModelKind::Oscillator => 1.0,
        }
    }

    pub fn v_minus_unchecked(&self, x: f64, p: &ParameterPoint) -> f64 {
        let w = self.w_unchecked(x, p);
        w * w - self.w_prime_unchecked(x, p)
    }

    pub fn v_plus_unchecked(&self, x: f64, p: &ParameterPoint) -> f64 {
        let w = self.w_unchecked(x, p);
        w * w + self.w_prime_unchecked(x, p)
    }

    pub fn evaluate_w(&self, x: f64, p: &ParameterPoint) -> Result<f64> {
        self.validate(p)?;
        Ok(self.w_unchecked(x, p))
    }

    pub fn evaluate_w_prime(&self, x: f64, p: &ParameterPoint) -> Result<f64> {
        self.validate(p)?;
        Ok(self.w_prime_unchecked(x, p))
    }

    /// `V-(x) = W² - W'`.
    pub fn potential_minus(&self, x: f64, p: &ParameterPoint) -> Result<f64> {
        self.validate(p)?;
        Ok(self.v_minus_unchecked(x, p))
    }

    /// `V+(x) = W² + W'`.
    pub fn potential_plus(&self, x: f64, p: &ParameterPoint) -> Result<f64> {
        self.validate(p)?;
        Ok(self.v_plus_unchecked(x, p))
    }

    /// Remainder `R(a)` in `V+(x, a) = V-(x, a + delta) + R(a)`.
    pub fn remainder(&self, p: &ParameterPoint) -> f64 {
        match self.kind {
            ModelKind::Oscillator => 2.0,
            _ => 2.0 * p.a - 1.0,
        }
    }

    /// Value of `V-` as `|x| -> inf` (where finite); bound levels sit below it.
    pub fn continuum_edge(&self, p: &ParameterPoint) -> Option<f64> {
        match self.kind {
            ModelKind::Oscillator => None,
            _ => Some(p.a * p.a),
        }
    }

    /// Number of normalizable levels: the `n` with `a - n > 0`, or the
    /// configured cap for the oscillator.
    pub fn max_bound_states(&self, p: &ParameterPoint) -> Result<usize> {
        self.validate(p)?;
        Ok(match self.kind {
            ModelKind::Oscillator => self.level_cap,
            _ => p.a.ceil() as usize,
        })
    }

    pub fn closed_form_energy(&self, p: &ParameterPoint, n: usize) -> Result<f64> {
        let bound_states = self.max_bound_states(p)?;
        if n >= bound_states {
            return Err(SipsError::LevelOutOfRange { level: n, bound_states });
        }
        let n = n as f64;
        Ok(match self.kind {
            ModelKind::Oscillator => 2.0 * n,
            _ => p.a * p.a - (p.a - n) * (p.a - n),
        })
    }
}

pub fn list_models() -> Vec<ModelInfo> {
    ModelKind::ALL.into_iter().map(|k| SuperpotentialModel::new(k).info()).collect()
}
