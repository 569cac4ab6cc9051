//! Group association schemes and perfect state transfer on their
//! underlying spin networks.
//!
//! The pipeline runs bottom-up:
//!
//! * [`groups`]: finite groups as Cayley tables, conjugacy classes, centers;
//! * [`chartab`]: intersection numbers and character tables;
//! * [`scheme`]: adjacency matrices, eigenvalue matrices `P`/`Q`,
//!   idempotents, stratification and symmetrization;
//! * [`pst`]: coupling synthesis, spectral amplitudes and gauge search;
//! * [`fullspace`]: brute-force qubit/qudit Hamiltonians used as an oracle.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod chartab;
pub mod error;
pub mod fullspace;
pub mod groups;
pub mod linalg;
pub mod pst;
pub mod scheme;

pub use chartab::{character_table, intersection_numbers, CharacterTable, IntersectionTensor};
pub use error::{Error, Result};
pub use groups::{ClassSet, Group};
pub use pst::{CouplingPlan, Convention, Objective, TransferReport};
pub use scheme::{GroupScheme, Stratification};

/// Numerical tolerances shared by every module.
pub mod tol {
    /// Eigenvalue and character matching.
    pub const EIGEN_MATCH: f64 = 1e-8;
    /// Orthogonality relations and algebra identities.
    pub const ORTHOGONALITY: f64 = 1e-9;
    /// Distance from an integer accepted when rounding character degrees.
    pub const DEGREE_ROUNDING: f64 = 1e-6;
    /// Imaginary residue accepted on synthesized couplings.
    pub const COUPLING_IMAG: f64 = 1e-10;
    /// Phase-matching residual for synthesized plans.
    pub const PHASE_MATCH: f64 = 1e-9;
}
