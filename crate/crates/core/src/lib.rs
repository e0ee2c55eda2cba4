//! Computational algebra for toric Landau-Ginzburg mirrors at desk scale.
//!
//! The crate is organized around six subsystems:
//!
//! - [`novikov`]: exact-exponent arithmetic in the Novikov field, Newton
//!   polygons and Hensel-style root lifting.
//! - [`equivariant`]: finite-dimensional g-differential spaces, truncated
//!   Weil algebras, Weil/Cartan models and the Mathai-Quillen morphism.
//! - [`ainfty`]: gapped filtered A-infinity structures, axiom checkers,
//!   bounding-cochain deformation and evaluation at equivariant parameters.
//! - [`mirror`]: the concrete model algebras for CP^1 and C, critical points
//!   of the Givental potentials and the Clifford-algebra comparison.
//! - [`mf`]: matrix factorizations, Koszul stabilizations, Clifford algebras
//!   and local jet-truncated multiplicities.
//! - [`tropical`]: fans, support functions, separation thresholds and
//!   tropical critical-point counts with Hensel lifts.
//!
//! The [`cli`] module wires these into the `givental` binary; [`io`] holds
//! the JSON schemas shared by the CLI and the C bindings.

pub mod ainfty;
pub mod cli;
pub mod equivariant;
pub mod io;
pub mod linalg;
pub mod mf;
pub mod mirror;
pub mod novikov;
pub mod scalar;
pub mod tropical;

/// Crate-wide error type.
///
/// The split drives process exit codes: malformed input is distinct from a
/// violated mathematical hypothesis (e.g. a parameter with nonpositive
/// valuation) and from an iteration that failed to converge.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("{0}")]
    Input(String),
    /// A mathematical precondition of an operation is violated.
    #[error("{0}")]
    Hypothesis(String),
    /// An iterative procedure failed to converge or stabilize.
    #[error("{0}")]
    Numerics(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
    pub fn numerics(msg: impl Into<String>) -> Self {
        Error::Numerics(msg.into())
    }
}
