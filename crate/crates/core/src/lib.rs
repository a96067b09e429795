//! Chain geometries `Sigma(K, R)` over small finite rings.
//!
//! The crate builds projective lines over finite rings, their distant graphs
//! and chain sets, the dual chain geometry together with the canonical
//! isomorphism `iota`, compatibility classes of blocks, and isomorphisms of
//! chain geometries induced by ring (anti)isomorphisms. Everything is
//! computed exhaustively, so each stated identity can be checked on the
//! whole ring.

pub mod chains;
pub mod compat;
pub mod duality;
pub mod error;
pub mod isomorph;
pub mod projline;
pub mod ring;

pub use error::{Error, Result};
