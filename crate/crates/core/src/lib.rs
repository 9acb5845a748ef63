//! Symbolic quiver dg-algebras and their truncated representation
//! varieties, with exact and numerical certification of the geometry they
//! cut out: commutator-space codimensions, lagrangian component dimensions,
//! Hilbert-scheme strata, and isotropy of the canonical 2-form.
//!
//! Everything is immutable after construction and every operation is a pure
//! function, so values can be shared freely across threads.

pub mod corpus;
pub mod dg;
pub mod error;
pub mod hochschild;
pub mod poly;
pub mod qmat;
pub mod repvar;
pub mod quiver;
pub mod scalar;

pub use error::{Error, Result};
