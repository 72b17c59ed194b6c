//! Wang-Landau adaptive MCMC on a compact interval.
//!
//! The crate provides the penalized Metropolis-Hastings kernel, the two
//! Wang-Landau drivers (deterministic `t^{-alpha}` schedule and the
//! flat-histogram schedule), trace analysis, and a theory lab that
//! simulates the objects used to show the flat-histogram criterion is met in
//! finite time: two-state bounding chains, their hitting times, the coupling
//! that dominates the true increment process, and the rational lattice of
//! reachable penalty vectors.
//!
//! Bins are indexed from zero in the API and from one in CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod diagnostics;
pub mod error;
pub mod kernel;
pub mod proposal;
pub mod seeds;
pub mod target;
pub mod theorylab;
pub mod wl;

pub use error::{Result, WlError};
pub use kernel::{mh_step, penalized_log_density, PenaltyState};
pub use proposal::{GaussianRandomWalk, IndependentUniform, Proposal};
pub use target::{ChainState, PartitionedTarget};
pub use wl::{DesiredFrequencies, FlatHistogramSchedule, RunTrace, TraceConfig, UpdateRule, WangLandau};
