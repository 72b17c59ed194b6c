use std::io::Write;

use crate::error::{Result, WlError};
use crate::wl::RunTrace;

/// Waiting times `t_k - t_{k-1}` for the `k`-th flat-histogram event,
/// over the replicas that reached it.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaWaitStats {
    pub kappa: u32,
    pub replicas: usize,
    pub mean: f64,
    pub median: f64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhHittingStats {
    pub per_kappa: Vec<KappaWaitStats>,
    pub events_per_replica: Vec<usize>,
    /// Indices of replicas that never met the criterion.
    pub zero_fh_replicas: Vec<usize>,
}

impl FhHittingStats {
    pub fn min_events(&self) -> usize {
        self.events_per_replica.iter().copied().min().unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| WlError::Io(e.to_string());
        w.write_record(["kappa", "replicas", "mean_wait", "median_wait", "max_wait"]).map_err(map)?;
        for s in &self.per_kappa {
            w.write_record([
                s.kappa.to_string(),
                s.replicas.to_string(),
                s.mean.to_string(),
                s.median.to_string(),
                s.max.to_string(),
            ])
            .map_err(map)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn fh_hitting_stats(traces: &[RunTrace]) -> Result<FhHittingStats> {
    if traces.is_empty() {
        return Err(WlError::Config("no traces to summarize".into()));
    }
    let waits: Vec<Vec<u64>> = traces
        .iter()
        .map(|tr| {
            let mut prev = 0;
            tr.fh_events
                .iter()
                .map(|e| {
                    let w = e.t - prev;
                    prev = e.t;
                    w
                })
                .collect()
        })
        .collect();
    let max_k = waits.iter().map(Vec::len).max().unwrap_or(0);
    let per_kappa = (0..max_k)
        .map(|k| {
            let mut col: Vec<u64> = waits.iter().filter_map(|w| w.get(k).copied()).collect();
            col.sort_unstable();
            let n = col.len();
            let median = if n % 2 == 1 { col[n / 2] as f64 } else { 0.5 * (col[n / 2 - 1] + col[n / 2]) as f64 };
            KappaWaitStats {
                kappa: k as u32 + 1,
                replicas: n,
                mean: col.iter().sum::<u64>() as f64 / n as f64,
                median,
                max: col[n - 1],
            }
        })
        .collect();
    let events_per_replica: Vec<usize> = waits.iter().map(Vec::len).collect();
    let zero_fh_replicas = events_per_replica.iter().enumerate().filter(|(_, &n)| n == 0).map(|(i, _)| i).collect();
    Ok(FhHittingStats { per_kappa, events_per_replica, zero_fh_replicas })
}
