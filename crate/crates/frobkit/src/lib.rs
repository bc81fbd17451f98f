//! frobkit: executable commutative algebra in characteristic p.
//!
//! The crate makes Frobenius-theoretic questions about finitely presented
//! F_p-algebras computable: sparse polynomial arithmetic, Gröbner bases,
//! presented algebras and their maps, relative Frobenius pushouts,
//! module-finiteness certificates, purity witnesses, and a scripted command
//! language driving it all from the `frobkit` binary.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod field_poly;
pub mod finmod;
pub mod frobenius;
pub mod groebner;
pub mod lemma_suite;
pub mod linalg;

pub use error::{Error, Result};
