//! Exact arithmetic for the ultra-discrete periodic Toda lattice and its
//! tropical spectral geometry: the evolution map and its min-plus invariants,
//! the spectral curve as a metric graph with period matrix and Abel-Jacobi
//! map, the tropical Riemann theta function with characteristics, the
//! trisecant-type three-term identity with its sign calculus, the tau-lattice
//! form of the dynamics, and numeric harnesses that tie everything back to
//! the discrete-time Toda lattice through the ultra-discretization limit.
//!
//! Core computations are exact over arbitrary-precision rationals. Only the
//! limit harnesses (`dtoda`, `hyperell`) use high-precision floating point.

pub mod curve;
pub mod dtoda;
pub mod error;
pub mod fay;
pub mod hyperell;
pub mod io;
pub mod matrix;
pub mod rational;
pub mod real;
pub mod taudyn;
pub mod theta;
pub mod udtoda;

pub use error::{Error, Result};
pub use rational::Rat;
