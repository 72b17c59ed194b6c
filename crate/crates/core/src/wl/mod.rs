//! Wang-Landau drivers: penalty updates, schedules and run traces.

mod driver;
mod schedule;
mod trace;
mod update;

pub use driver::{TraceConfig, WangLandau};
pub use schedule::{deterministic_gamma, fh_met, FlatHistogramSchedule, ScheduleState};
pub use trace::{FhEvent, RunTrace, TraceRecord};
pub use update::{apply_update, linear_increment, linear_update, DesiredFrequencies, UpdateRule};
