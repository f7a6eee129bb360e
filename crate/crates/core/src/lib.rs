//! Exact-arithmetic invariants of Tambara-Yamagami categories.
//!
//! The crate computes, over finite abelian groups with symmetric
//! S^1-valued pairings:
//!
//! - normalized Gauss sums of quadratic maps and the derived invariants
//!   zeta_k, by three independent routes (full enumeration, a principal
//!   factorization, and an odd-prime closed form);
//! - the lens-space state-sum invariants |L_k| of the categories
//!   TY(A, chi, nu), via both the closed formula and the twist/dimension
//!   catalog of the category's center;
//! - complete classification invariants of nondegenerate pairings on
//!   odd-order groups, cross-checked against a brute-force isomorphism
//!   oracle;
//! - structural verification of the category data itself (pentagon and
//!   duality identities).
//!
//! All circle values are elements of Q/Z in exact fraction arithmetic;
//! floating point appears only at the numeric boundary, where results are
//! snapped back to exact eighth roots of unity or exact phases.

pub mod arith;
pub mod classify;
pub mod cyclotomic;
pub mod dense;
pub mod distinguish;
pub mod error;
pub mod form;
pub mod gauss;
pub mod group;
pub mod phase;
pub mod selftest;
pub mod tycat;

pub use error::Error;
