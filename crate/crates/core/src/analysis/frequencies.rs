use crate::error::{Result, WlError};
use crate::wl::RunTrace;

/// Running visit proportions `nu_t(i) / t` at the recorded times.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTrace {
    pub times: Vec<u64>,
    pub freqs: Vec<Vec<f64>>,
}

impl FrequencyTrace {
    pub fn last(&self) -> Option<&[f64]> {
        self.freqs.last().map(Vec::as_slice)
    }
}

pub fn frequency_trace(trace: &RunTrace) -> Result<FrequencyTrace> {
    if trace.records.is_empty() {
        return Err(WlError::TraceFormat("trace has no records".into()));
    }
    let times = trace.records.iter().map(|r| r.t).collect();
    let freqs = trace.records.iter().map(|r| r.visits.iter().map(|&n| n as f64 / r.t as f64).collect()).collect();
    Ok(FrequencyTrace { times, freqs })
}

/// Visit proportions over the second half of the run: counts accumulated
/// after the last record at or before `T/2`, divided by the iterations since.
pub fn last_half_frequencies(trace: &RunTrace) -> Vec<f64> {
    let half = trace.iterations / 2;
    let anchor = trace.records.iter().rev().find(|r| r.t <= half);
    match anchor {
        Some(r) if r.t < trace.iterations => {
            let span = (trace.iterations - r.t) as f64;
            trace.final_visits.iter().zip(&r.visits).map(|(&end, &start)| (end - start) as f64 / span).collect()
        }
        _ => trace.final_frequencies(),
    }
}

/// `Z^{(i,j)}` at every recorded time (zero-based bin indices).
pub fn z_trajectory(trace: &RunTrace, i: usize, j: usize) -> Result<Vec<f64>> {
    if i == j {
        return Err(WlError::Domain(format!("ratio needs two distinct bins, got ({i}, {i})")));
    }
    if i >= trace.d || j >= trace.d {
        return Err(WlError::TraceFormat(format!(
            "trace has {} bins, no column for pair ({}, {})",
            trace.d,
            i + 1,
            j + 1
        )));
    }
    Ok(trace.records.iter().map(|r| r.z(i, j)).collect())
}
