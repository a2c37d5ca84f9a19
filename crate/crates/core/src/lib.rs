//! Boson sampling in the collision regime.
//!
//! Permanents of unitary submatrices with repeated columns, an exact
//! chain-rule sampler built on them, the analytic distribution of occupied
//! output ports, and the resulting operation-count bounds.

pub mod bench;
pub mod config;
pub mod error;
pub mod gof;
pub mod gray;
pub mod matrix;
pub mod permanent;
pub mod ports;
pub mod rng;
pub mod sampler;

pub use config::OutputConfiguration;
pub use error::{Error, Result};
pub use matrix::{haar_unitary, submatrix, unitarity_defect, ComplexMatrix, UnitaryMatrix};
