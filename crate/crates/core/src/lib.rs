//! Supersymmetric quantum mechanics for shape-invariant potentials.
//!
//! Bound-state spectra come out two ways: summing shape-invariance
//! remainders ([`susy`]) and reading them off the SO(2,1) Casimir
//! ([`algebra`]). Eigenfunctions are built with ladder operators, the
//! SO(2,1) unireps are classified in [`unireps`], and every analytic result
//! can be checked against the finite-difference solver in [`oracle`].

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod stencil;
pub mod susy;
pub mod unireps;

pub use catalog::{list_models, Domain, ModelInfo, ModelKind, ParameterPoint, SuperpotentialModel};
pub use error::{Result, SipsError};
pub use grid::{Grid, SampledFunction};
pub use susy::Spectrum;
