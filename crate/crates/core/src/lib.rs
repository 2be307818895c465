//! Exact spectra of product matrices over finite commutative rings.
//!
//! A finite commutative ring `R = {x_1, .., x_N}` and an element `u` give the
//! 0/1 matrix `A_u(R)` with a one at `(i, j)` exactly when `x_i x_j = u`.
//! This crate builds the rings (integers mod m, finite fields, polynomial
//! quotients, null extensions, direct products), analyses the radical
//! filtration of local rings, builds `A_u(R)` under several element orderings,
//! computes its characteristic polynomial `det(A - λI)` exactly, and evaluates
//! the closed-form predictions for the local-ring families where one is known.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod builders;
pub mod charpoly;
mod error;
pub mod formulas;
pub mod local;
pub mod matrix;
mod modular;
pub mod poly;
pub mod ring;

pub use builders::{parse_ring_spec, ModPoly, RingSpec};
pub use charpoly::{charpoly_berkowitz, charpoly_dense, charpoly_lowrank, IntMatrix};
pub use error::{Error, Result};
pub use formulas::{classify, classify_case, classify_under, classify_with, CaseTag, Classification, Theorem, Unsupported};
pub use local::{LocalProfile, Stratum, StructureBasis};
pub use matrix::{BitMatrix, OrderingPlan, OrderingTag, ProductMatrix};
pub use poly::{FactoredPoly, IntPoly};
pub use ring::{ElementId, FiniteRing, DEFAULT_ORDER_CAP, MAX_ORDER};
