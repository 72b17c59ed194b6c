//! Diagnostics over run traces: visit frequencies, penalty ratios, the
//! two-bin limit of the visit proportions, and flat-histogram waiting times.

mod fh_stats;
mod frequencies;
mod limit;
pub mod svg;

pub use fh_stats::{fh_hitting_stats, FhHittingStats, KappaWaitStats};
pub use frequencies::{frequency_trace, last_half_frequencies, z_trajectory, FrequencyTrace};
pub use limit::{eq3_limit, linear_limit, predict_limit, z_increments, LimitPrediction};
