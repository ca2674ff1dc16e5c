//! Exact computations on finite orthosets and orthomodular structures:
//! orthoclosed sets, ortholattices, Sasaki maps and Sasaki projections,
//! and anisotropic Hermitian spaces over ℚ and ℚ(i).

pub mod automorphism;
pub mod config;
pub mod corpus;
pub mod error;
pub mod hermitian;
pub mod lattice;
pub mod orthoset;
pub mod report;
pub mod sasaki;
pub mod subset;

pub use config::Budgets;
pub use error::{Error, Result};
pub use lattice::OrthoLattice;
pub use orthoset::Orthoset;
pub use report::{Check, PropertyReport, Verdict};
pub use subset::Subset;
