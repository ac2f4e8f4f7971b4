//! Exact-arithmetic toolkit for finite-dimensional algebras given by
//! structure constants: derivation algebras, centers and central series,
//! and certificate-producing constructions of local derivations and local
//! automorphisms that are not derivations or automorphisms.
//!
//! All arithmetic is exact (arbitrary-precision rationals or GF(p));
//! every certificate is re-verified before it is handed out.

pub mod algebra;
pub mod autolocal;
pub mod catalog;
pub mod deriv;
pub mod error;
pub mod field;
pub mod json;
pub mod linmap;
pub mod localder;
pub mod matrix;
pub mod parse;
pub mod sample;
pub mod subspace;

pub use algebra::{AlgebraTable, Nilindex, SeriesReport, StructureReport};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linmap::LinearMap;
pub use matrix::Matrix;
pub use subspace::Subspace;
