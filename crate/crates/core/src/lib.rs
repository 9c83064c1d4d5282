//! Exact-arithmetic workbench for Azumaya algebras over finite commutative rings.

pub mod algebra;
pub mod arith;
pub mod corpus;
pub mod error;
pub mod hom;
pub mod linalg;
pub mod pi;
pub mod report;
pub mod ring;
pub mod suites;

pub use error::{Error, Result};
