//! Correlated Erdős–Rényi graph pairs: samplers, the exact likelihood ratio,
//! edge-orbit algebra, the truncated second moment, and the tree/forest
//! combinatorics that governs it.

pub mod combinatorics;
pub mod error;
pub mod harness;
pub mod likelihood;
pub mod model;
pub mod orbits;
pub mod rng;
pub mod second_moment;
pub mod stats;

pub use error::{Error, Result};
