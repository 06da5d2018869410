//! Sparse, reconstructing time-frequency representations with an explicit
//! chirp-factor track, computed by convex optimization.
//!
//! The pipeline: [`synth`] builds benchmark signals, [`solver::tycoon`]
//! computes the representation, [`baselines`] provides STFT and
//! synchrosqueezed STFT for comparison, and [`metrics`] scores any of them
//! against the ideal time-varying power spectrum.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bench;
pub mod error;
pub mod functional;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod operators;
pub mod solver;
pub mod synth;

pub use error::{Result, TycoonError};
pub use functional::{eval_h, grad_smooth, HTerms, MuSchedule, TycoonParams};
pub use grid::{make_grid, ChirpTrack, SampledSignal, TFGrid, TFMatrix};
pub use operators::{DerivMethod, TfOperators};
pub use solver::{tycoon, TycoonResult};

pub use ndarray;
pub use num_complex;
