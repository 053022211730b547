//! Streak artifacts from beam hardening around smooth, possibly non-convex
//! metal regions.
//!
//! From the shape of the metal boundary alone, [`geometry`] finds the lines
//! along which filtered backprojection produces streaks. [`artifacts`] runs
//! the parallel-beam simulation and scores the reconstruction against those
//! lines. [`cuspwave`] covers the Fourier decay of the squared cusp wave that
//! arises at flat points of the boundary.
//!
//! Comparisons are written as `!(x > 0.0)` in many places so that NaN is
//! rejected along with the out-of-range values.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod cli;
pub mod config;
pub mod cuspwave;
pub mod error;
pub mod fft;
pub mod geometry;
pub mod nonlinearity;
pub mod numeric;
pub mod transform;

pub use error::{Error, Result};
