//! Exact verification of the operator algebra of a superintegrable
//! spin-orbit Coulomb system, plus a numerical lab for its radial spectrum.

pub mod cli;
pub mod coalgebra;
pub mod models;
pub mod opalg;
pub mod spectral;
pub mod verifier;

use thiserror::Error;

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] opalg::OpAlgError),
    #[error(transparent)]
    Coalgebra(#[from] coalgebra::CoalgebraError),
    #[error(transparent)]
    Model(#[from] models::ModelError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
