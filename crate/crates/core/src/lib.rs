//! Finite subgroups of `GL2(Z/ellZ)`, their orbits on nonzero vectors, and
//! executable divisibility certificates for Borel-type images.
//!
//! Modules, bottom up:
//! - [`modarith`]: prime-field and cyclic unit-group arithmetic.
//! - [`gl2`]: matrices, explicit subgroups, Borel and Cartan subgroups.
//! - [`semisimplify`]: diagonal parts and the containment/diagonalization trichotomy.
//! - [`orbits`]: orbit enumeration, stabilizers, coset refinement, divisibility transfer.
//! - [`divchain`]: scenario validation and certificate checking.
//! - [`sweep`]: seeded scenario generation and verification reports.

pub mod divchain;
pub mod error;
pub mod gl2;
pub mod modarith;
pub mod orbits;
pub mod semisimplify;
pub mod sweep;

pub use error::{Error, Result};
