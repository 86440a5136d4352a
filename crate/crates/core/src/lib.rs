//! Inference on a large sample's empirical distribution function `F_N`, and on
//! the population distribution `F` behind it, from a multinomial *virtual
//! subsample*: `m` indices are drawn with replacement from `{0, …, N-1}` and only
//! the selected records are ever read.
//!
//! The crate is organised bottom-up:
//!
//! * [`limitdist`] – Kolmogorov and Cramér–von Mises limit laws, the normal law,
//!   and the continuous reference models used as nulls and truths.
//! * [`resample`] – multinomial weight vectors and their summary statistics.
//! * [`edf`] – step-function representations of `F_N` and of the weighted
//!   subsample EDF `F_{m,N}`, with exact sup-norm and integral functionals.
//! * [`bands`], [`gof`], [`pointwise`] – confidence bands, goodness-of-fit
//!   tests and pointwise intervals built on the above.
//! * [`montecarlo`] – samplers and the coverage / level replication harness.
//! * [`ingest`] – out-of-core extraction of the subsampled records, JSON
//!   reports and the command line front end.

pub mod bands;
pub mod cli;
pub mod edf;
mod error;
pub mod gof;
pub mod ingest;
pub mod limitdist;
pub mod montecarlo;
pub mod pointwise;
pub mod resample;
pub mod seed;

pub use error::{Error, Result};
