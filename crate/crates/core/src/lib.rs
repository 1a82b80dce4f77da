//! Discrete polymatroids whose independence polytopes are reflexive.
//!
//! The crate builds the polymatroid attached to a sublattice of the Boolean
//! lattice `2^[d]`, decides reflexivity of independence polytopes by two
//! independent routes (a closed/inseparable rank criterion and direct exact
//! geometry), and runs exhaustive classification sweeps for small `d`.
//!
//! Subsets of `[d]` are bitmasks with bit `i − 1` standing for element `i`.

pub mod audit;
pub mod classify;
pub mod error;
pub mod polymatroid;
pub mod polytope;
pub mod rational;
pub mod setfam;

pub use error::{Error, Result};
