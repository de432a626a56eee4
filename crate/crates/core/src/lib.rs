//! Entanglement generated between discrete bosonic field modes by Bogoliubov
//! transformations, computed in the covariance-matrix (symplectic) picture.
//!
//! The crate is organised bottom-up:
//!
//! - [`gaussian`] and [`symplectic`]: Gaussian states, symplectic matrices,
//!   partial traces/transposes, symplectic eigenvalues and the negativity.
//! - [`bogoliubov`]: coefficient matrices `alpha`/`beta`, their lift to phase
//!   space, Maclaurin-series extraction and the text file format.
//! - [`perturbation`]: leading-order negativity, degenerate symplectic
//!   eigenvalue corrections, two-mode truncation and mixedness diagnostics.
//! - [`cavity`]: a rigid Dirichlet cavity moving along inertial and uniformly
//!   accelerated segments.
//! - [`frw`]: opposite-momentum pair creation in a tanh-profile expanding
//!   universe.
//!
//! Quadratures are ordered `(x_1, p_1, x_2, p_2, ...)` with the vacuum
//! covariance matrix equal to the identity.

#[cfg(test)]
#[macro_use]
mod test_util;

pub mod bogoliubov;
pub mod cavity;
pub mod error;
pub mod frw;
pub mod gaussian;
pub mod perturbation;
pub mod quadrature;
pub mod symplectic;

pub use num_complex::Complex64;

pub use cavity::{CavityConfig, Segment, TravelScenario};
pub use frw::FrwConfig;
pub use bogoliubov::{BogoCoeffs, IdentityReport, OrderTag, PhaseVector, SeriesTerm};

pub use error::{Error, Result};

pub use gaussian::{EntanglementReport, GaussianState};
pub use symplectic::SymplecticMatrix;

/// Dense real matrix used for covariance and symplectic matrices.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense complex matrix used for Bogoliubov coefficients.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
