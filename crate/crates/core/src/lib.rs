//! Exact lattice-triangle combinatorics for blow-ups of Picard-rank-one toric
//! surfaces at a general point.
//!
//! Everything is exact: scalars are [`Rational`]s over arbitrary-precision
//! integers and no floating point is used anywhere.
//!
//! The crate is `no_std` (it needs `alloc`).

#![no_std]
extern crate alloc;

pub mod catalog;
pub mod classify;
pub mod error;
pub mod exact;
pub mod interp;
pub mod linalg;
pub mod modular;
pub mod poly;
pub mod profile;
pub mod wpp;

pub use error::{MdsError, Result};
pub use exact::Rational;
pub use poly::BivariatePoly;
pub use profile::{ColumnProfile, Slopes};
pub use wpp::{Relation, Triple};
