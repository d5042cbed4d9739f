//! Unitary irreducible representations of SO(2,1).
//!
//! States `|j, m>` carry Casimir `j(j+1)` and `J3 = m`. The ladder
//! coefficients are `sqrt(-(j - m)(j + m + 1))` (raise) and
//! `sqrt(-(j + m)(j - m + 1))` (lower); unitarity needs both radicands
//! nonnegative, which splits the `(j, m)` plane into a bounded-below
//! wedge, a bounded-above wedge and a central square.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SipsError};

/// Radicands within this (scaled) distance of zero count as multiplet edges.
const EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "raise")]
    Raise,
    #[serde(rename = "lower")]
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepClass {
    /// Bounded from below.
    #[serde(rename = "D_plus")]
    DPlus,
    /// Bounded from above.
    #[serde(rename = "D_minus")]
    DMinus,
    /// Supplementary series, unbounded with real `j`.
    #[serde(rename = "D_s")]
    DSupplementary,
    /// Principal series, `j = -1/2 + i beta`.
    #[serde(rename = "D_p")]
    DPrincipal,
}

impl fmt::Display for RepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepClass::DPlus => "D_plus",
            RepClass::DMinus => "D_minus",
            RepClass::DSupplementary => "D_s",
            RepClass::DPrincipal => "D_p",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepLabel {
    pub class: RepClass,
    /// Real part of `j` (`-1/2` for the principal series).
    pub j: f64,
    /// Imaginary part of `j`; zero except for the principal series.
    pub beta: f64,
    pub m0: f64,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EDGE_TOL * (1.0 + a.abs().max(b.abs()))
}

fn edge_scale(c: f64, m: f64) -> f64 {
    EDGE_TOL * (1.0 + m * m + c.abs())
}

impl RepLabel {
    /// `D+(j)`, `j < 0`, lowest weight `m0 = -j`.
    pub fn d_plus(j: f64) -> Result<Self> {
        if !(j < 0.0) {
            return Err(SipsError::InvalidParameter {
                model: "D_plus".into(),
                reason: format!("need j < 0, got {j}"),
            });
        }
        Ok(Self { class: RepClass::DPlus, j, beta: 0.0, m0: -j })
    }

    /// `D-(j)`, `j < 0`, highest weight `m0 = j`.
    pub fn d_minus(j: f64) -> Result<Self> {
        if !(j < 0.0) {
            return Err(SipsError::InvalidParameter {
                model: "D_minus".into(),
                reason: format!("need j < 0, got {j}"),
            });
        }
        Ok(Self { class: RepClass::DMinus, j, beta: 0.0, m0: j })
    }

    /// `D_s(j, m0)` with `-1/2 < m0 < 1/2` and `j(j+1) < (|m0| - 1)|m0|`.
    pub fn supplementary(j: f64, m0: f64) -> Result<Self> {
        if !in_square(j, m0) {
            return Err(SipsError::InvalidParameter {
                model: "D_s".into(),
                reason: format!("(j, m0) = ({j}, {m0}) is outside the square region"),
            });
        }
        Ok(Self { class: RepClass::DSupplementary, j, beta: 0.0, m0 })
    }

    /// `D_p(j = -1/2 + i beta, m0)` with `-1/2 < m0 < 1/2`.
    pub fn principal(beta: f64, m0: f64) -> Result<Self> {
        if !(m0.abs() < 0.5) || !beta.is_finite() {
            return Err(SipsError::InvalidParameter {
                model: "D_p".into(),
                reason: format!("need -1/2 < m0 < 1/2, got {m0}"),
            });
        }
        Ok(Self { class: RepClass::DPrincipal, j: -0.5, beta, m0 })
    }

    /// Eigenvalue of the Casimir; real for every class.
    pub fn casimir(&self) -> f64 {
        match self.class {
            RepClass::DPrincipal => -0.25 - self.beta * self.beta,
            _ => self.j * (self.j + 1.0),
        }
    }

    /// Same multiplet labelled by `j -> -j - 1` (`beta -> -beta` for `D_p`).
    pub fn equivalent(&self) -> Self {
        match self.class {
            RepClass::DPrincipal => Self { beta: -self.beta, ..*self },
            _ => Self { j: -self.j - 1.0, ..*self },
        }
    }

    /// `(J+J-, J-J+)` expectation values at weight `m`.
    pub fn positivity(&self, m: f64) -> (f64, f64) {
        match self.class {
            RepClass::DPrincipal => {
                let c = self.casimir();
                (m * m - m - c, m * m + m - c)
            }
            _ => positivity_check(self.j, m),
        }
    }

    pub fn coefficient(&self, m: f64, direction: Direction) -> Result<f64> {
        let (lower, raise) = self.positivity(m);
        let r = match direction {
            Direction::Raise => raise,
            Direction::Lower => lower,
        };
        sqrt_radicand(self.j, m, r, edge_scale(self.casimir(), m))
    }
}

fn sqrt_radicand(j: f64, m: f64, radicand: f64, tol: f64) -> Result<f64> {
    if radicand < -tol {
        Err(SipsError::NegativeRadicand { j, m, radicand })
    } else if radicand <= tol {
        Ok(0.0)
    } else {
        Ok(radicand.sqrt())
    }
}

/// `(-(j + m)(j - m + 1), -(j - m)(j + m + 1))`, the `J+J-` and `J-J+`
/// expectation values in `|j, m>`.
pub fn positivity_check(j: f64, m: f64) -> (f64, f64) {
    (-(j + m) * (j - m + 1.0), -(j - m) * (j + m + 1.0))
}

pub fn is_admissible(j: f64, m: f64) -> bool {
    let (lower, raise) = positivity_check(j, m);
    let tol = edge_scale(j * (j + 1.0), m);
    lower >= -tol && raise >= -tol
}

/// Coefficient `c` in `J± |j, m> = c |j, m ± 1>`.
pub fn ladder_coefficient(j: f64, m: f64, direction: Direction) -> Result<f64> {
    let (lower, raise) = positivity_check(j, m);
    let r = match direction {
        Direction::Raise => raise,
        Direction::Lower => lower,
    };
    sqrt_radicand(j, m, r, edge_scale(j * (j + 1.0), m))
}

fn in_square(j: f64, m0: f64) -> bool {
    let am = m0.abs();
    am < 0.5 && j * (j + 1.0) < (am - 1.0) * am
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub rep: Option<RepLabel>,
    pub note: String,
}

/// Matches `(j, m0)` against the table of unirep classes. A lowest weight
/// on `m0 = j + 1` (the `-j - 1` label of the same `D+`) is accepted as
/// well, and mirrored for `D-`. The principal series needs complex `j` and
/// is only reachable through [`RepLabel::principal`].
pub fn classify(j: f64, m0: f64) -> Classification {
    let band_note = "square band read as -1/2 < m0 < 1/2";
    if !j.is_finite() || !m0.is_finite() {
        return Classification { rep: None, note: "non-finite input".into() };
    }
    let rep = if (j < 0.0 && close(m0, -j)) || (j > -1.0 && close(m0, j + 1.0)) {
        Some(RepLabel { class: RepClass::DPlus, j, beta: 0.0, m0 })
    } else if (j < 0.0 && close(m0, j)) || (j > -1.0 && close(m0, -j - 1.0)) {
        Some(RepLabel { class: RepClass::DMinus, j, beta: 0.0, m0 })
    } else if in_square(j, m0) {
        Some(RepLabel { class: RepClass::DSupplementary, j, beta: 0.0, m0 })
    } else {
        None
    };
    let note = match &rep {
        Some(r) if r.class == RepClass::DSupplementary => band_note.to_owned(),
        Some(r) => format!("{} lowest/highest weight m0 = {}", r.class, r.m0),
        None => format!("no unitary class contains (j, m0) = ({j}, {m0}); {band_note}"),
    };
    Classification { rep, note }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multiplet {
    pub rep: RepLabel,
    pub m_values: Vec<f64>,
    pub casimir: f64,
}

impl Multiplet {
    /// `(raise, lower)` coefficients at every listed weight.
    pub fn coefficients(&self) -> Result<Vec<(f64, f64)>> {
        self.m_values
            .iter()
            .map(|&m| Ok((self.rep.coefficient(m, Direction::Raise)?, self.rep.coefficient(m, Direction::Lower)?)))
            .collect()
    }
}

/// First `count` weights of the multiplet: upward from `m0` for `D+`,
/// downward for `D-`, and symmetric about `m0` (ascending) otherwise.
pub fn enumerate_multiplet(rep: &RepLabel, count: usize) -> Result<Multiplet> {
    if count == 0 {
        return Err(SipsError::InvalidParameter {
            model: rep.class.to_string(),
            reason: "count must be at least 1".into(),
        });
    }
    let m_values: Vec<f64> = match rep.class {
        RepClass::DPlus => (0..count).map(|n| rep.m0 + n as f64).collect(),
        RepClass::DMinus => (0..count).map(|n| rep.m0 - n as f64).collect(),
        RepClass::DSupplementary | RepClass::DPrincipal => {
            let below = ((count - 1) / 2) as i64;
            (0..count as i64).map(|k| rep.m0 + (k - below) as f64).collect()
        }
    };
    for &m in &m_values {
        let (lower, raise) = rep.positivity(m);
        let tol = edge_scale(rep.casimir(), m);
        if lower < -tol {
            return Err(SipsError::NegativeRadicand { j: rep.j, m, radicand: lower });
        }
        if raise < -tol {
            return Err(SipsError::NegativeRadicand { j: rep.j, m, radicand: raise });
        }
    }
    Ok(Multiplet { rep: *rep, m_values, casimir: rep.casimir() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "bounded_below_region")]
    BoundedBelow,
    #[serde(rename = "bounded_above_region")]
    BoundedAbove,
    #[serde(rename = "square_region")]
    Square,
    #[serde(rename = "forbidden")]
    Forbidden,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::BoundedBelow => "bounded_below_region",
            Region::BoundedAbove => "bounded_above_region",
            Region::Square => "square_region",
            Region::Forbidden => "forbidden",
        }
    }
}

/// Which allowed area of the `(j, m)` plane a state falls in. Admissible
/// points off the open square go to the wedge on their side of `m = 0`.
pub fn region_of(j: f64, m: f64) -> Region {
    if !is_admissible(j, m) {
        Region::Forbidden
    } else if in_square(j, m) {
        Region::Square
    } else if m >= 0.0 {
        Region::BoundedBelow
    } else {
        Region::BoundedAbove
    }
}
