//! Uniruledness criteria for orthogonal modular varieties of even lattices of
//! signature `(b, 2)`: lattice invariants, discriminant forms, local counts,
//! the `(1,0)` Eisenstein coefficient and the resulting numeric tests.

#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod catalog;
pub mod disc;
pub mod eisenstein;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod local;
pub mod numeric;
pub mod report;
pub mod surrogate;

pub use error::{OmvError, Result};
