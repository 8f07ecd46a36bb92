//! Numerical workbench for two-parameter q-oscillator algebras.
//!
//! - [`bracket`]: scalar bracket kernels and the identities relating them
//! - [`ladder`]: exact shift operators on a number basis
//! - [`fock`]: lowest-weight Fock representations
//! - [`algebra`]: family registry, relation residuals, Casimir checks
//! - [`transforms`]: dressing maps, reductions, inequivalence scans
//! - [`hopf`]: coproduct ansatz residuals and the Hopf k-scan

pub mod algebra;
pub mod bracket;
pub mod error;
pub mod fock;
pub mod hopf;
pub mod ladder;
pub mod transforms;

pub use error::{Error, Result};
