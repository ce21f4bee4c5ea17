//! Entanglement of two indistinguishable particles computed by two independent routes.
//!
//! The [`lfc`] module works with unlabeled two-particle kets `|φ,ψ⟩` whose inner product is
//! symmetrized according to the particle statistics, and reduces them with a localized
//! partial trace over the modes of a spatial region. The [`fock`] and [`reduce`] modules do
//! the same reduction in an occupation-number Fock space with bosonic or fermionic creation
//! and annihilation operators. Both routes produce the same single-particle reduced matrix,
//! which [`entropy`] turns into von Neumann entanglement measures. [`doublewell`] evaluates
//! the two-particle asymmetric double-well example in closed form and through the generic
//! pipelines, and [`parser`] reads and prints the `.lfc` state description language.

pub mod doublewell;
pub mod entropy;
mod error;
pub mod fock;
pub mod format;
pub mod lfc;
pub mod parser;
pub mod reduce;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    ManyBodyVector, ModeBasis, ModeLabel, Occupation, SingleParticleVector, Statistics,
};
pub use lfc::{LfcState, ProductKet, SpatialRegion};
pub use reduce::{DensityMatrix, Reduced};

pub use num_complex::Complex64;

/// Amplitudes with magnitude below this are dropped from sparse many-body storage.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// States whose norm does not exceed this are treated as the zero vector.
pub const NORM_THRESHOLD: f64 = 1e-12;
