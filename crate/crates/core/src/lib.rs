//! Isometry analysis of locally homogeneous Riemannian spaces.
//!
//! Given the structure constants of an n-dimensional Lie algebra acting
//! simply transitively and a rigid frame metric (symbolic or numeric), the
//! crate computes the irreducible frame-metric class under inner-automorphism
//! gauge transformations, the curvature of the homogeneous space, and the
//! full isometry algebra — in particular the Killing vector fields induced
//! beyond the initial homogeneity group. The three-dimensional Bianchi
//! catalog ships with coordinate realizations that serve as a numeric oracle
//! for every symbolic result.

pub mod cartan_geometry;
pub mod cli;
pub mod coordinate_realizations;
pub mod error;
pub mod exact_algebra;
pub mod gauge_reduction;
pub mod killing_closure;
pub mod lie_core;
pub mod report;

pub use error::{Error, Result};

/// Default RNG seed used when neither `--seed` nor `HOMSYM_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x4b69_6c6c_696e_6721;
