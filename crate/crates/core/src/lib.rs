//! Certified enclosures of the Hausdorff dimension of limit sets generated
//! by subshifts of one-dimensional conformal iterated function systems.
//!
//! The layers build on each other:
//!
//! * [`symbolic`]: words, subshifts (full, Markov, β, coded) and their languages.
//! * [`betashift`]: β-expansions, sparse zero replacement between β-shifts,
//!   inner shift-of-finite-type approximations.
//! * [`conformal`]: affine and continued-fraction map families with their
//!   distortion constants.
//! * [`pressure`]: partition functions, two-sided pressure enclosures and the
//!   Bowen root.
//! * [`spectrum`]: adaptive dimension evaluation, β sweeps, inversion of the
//!   dimension spectrum, Markov block constructions.
//!
//! Every bound that leaves this crate as an enclosure is computed with
//! outward rounding.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod betashift;
pub mod conformal;
pub mod error;
pub mod pressure;
pub mod rounding;
pub mod spectrum;
pub mod symbolic;

pub use error::{Error, Result};
