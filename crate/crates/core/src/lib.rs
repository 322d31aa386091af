//! Ambiguity analysis for integer linear arrays.
//!
//! An array with element positions `r` is ambiguous at a set of angles when
//! its steering matrix loses rank. For `M` distinct angles the generalized
//! Vandermonde determinant factors as a Schur polynomial times the classical
//! Vandermonde determinant, and the Schur polynomial is a sum of monomials
//! indexed by semistandard Young tableaux. Ambiguities are then exactly the
//! angle sets that make this sum vanish, which happens only by grouping
//! the monomials into rotated minimal vanishing sums of roots of unity.

pub mod array;
pub mod cyclotomic;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod symmetric;
pub mod tableaux;
pub mod vansums;

pub use error::{AmbigError, Result};
