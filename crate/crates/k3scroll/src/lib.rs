//! Scroll-embedding invariants of polarized K3 surfaces computed exactly from
//! Picard lattice data.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod classify;
pub mod clifford;
pub mod cohomology;
pub mod lattice;
pub mod moduli;
pub mod par;
pub mod resolution;
pub mod rolling;
pub mod scroll;

pub use error::{Error, Result};
