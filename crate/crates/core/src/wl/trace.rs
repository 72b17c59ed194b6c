use std::io::{Read, Write};

use crate::error::{Result, WlError};

/// Snapshot after iteration `t` (penalties already updated).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: u64,
    /// Zero-based bin of `X_t`.
    pub bin: usize,
    pub gamma: f64,
    pub kappa: u32,
    pub fh_event: bool,
    pub log_theta: Vec<f64>,
    /// Cumulative visits per bin over iterations `1..=t`.
    pub visits: Vec<u64>,
}

impl TraceRecord {
    pub fn z(&self, i: usize, j: usize) -> f64 {
        self.log_theta[i] - self.log_theta[j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhEvent {
    /// Value of `kappa` after the event.
    pub kappa: u32,
    /// Global iteration at which the criterion was met.
    pub t: u64,
    pub gamma_before: f64,
    pub gamma_after: f64,
}

/// Output of one sampler run.
///
/// Records are kept for `t = 1, 1 + stride, 1 + 2 stride, ...`, so a run of
/// `T` iterations holds `ceil(T / stride)` of them. Flat-histogram events and
/// the final state are stored in full regardless of the stride.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub d: usize,
    pub stride: u64,
    pub iterations: u64,
    pub records: Vec<TraceRecord>,
    pub fh_events: Vec<FhEvent>,
    pub final_log_theta: Vec<f64>,
    pub final_visits: Vec<u64>,
    pub final_x: f64,
    pub final_gamma: f64,
    pub final_kappa: u32,
    pub accepted: u64,
    /// Set when the run stopped early on a numerical failure; the trace then
    /// covers the iterations completed before it.
    pub failure: Option<String>,
}

fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub(crate) fn pair_labels(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

impl RunTrace {
    pub fn final_frequencies(&self) -> Vec<f64> {
        let t = self.iterations.max(1) as f64;
        self.final_visits.iter().map(|&n| n as f64 / t).collect()
    }

    pub fn final_z(&self, i: usize, j: usize) -> f64 {
        self.final_log_theta[i] - self.final_log_theta[j]
    }

    pub fn csv_header(d: usize) -> Vec<String> {
        let mut h: Vec<String> = ["t", "bin", "gamma", "kappa", "fh_event"].iter().map(|s| s.to_string()).collect();
        h.extend(pair_labels(d).into_iter().map(|(i, j)| format!("z_{}_{}", i + 1, j + 1)));
        h.extend((1..=d).map(|i| format!("visits_{i}")));
        h
    }

    /// Writes `t,bin,gamma,kappa,fh_event,z_1_2,...,visits_1,...` with
    /// one-based bin indices.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| WlError::Io(e.to_string());
        w.write_record(Self::csv_header(self.d)).map_err(map)?;
        let pairs = pair_labels(self.d);
        for r in &self.records {
            let mut row = vec![
                r.t.to_string(),
                (r.bin + 1).to_string(),
                fmt_f64(r.gamma),
                r.kappa.to_string(),
                u8::from(r.fh_event).to_string(),
            ];
            row.extend(pairs.iter().map(|&(i, j)| fmt_f64(r.z(i, j))));
            row.extend(r.visits.iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(map)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `kappa,t_global,gamma_before,gamma_after`.
    pub fn write_fh_log_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| WlError::Io(e.to_string());
        w.write_record(["kappa", "t_global", "gamma_before", "gamma_after"]).map_err(map)?;
        for e in &self.fh_events {
            w.write_record([e.kappa.to_string(), e.t.to_string(), fmt_f64(e.gamma_before), fmt_f64(e.gamma_after)])
                .map_err(map)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rebuilds a trace from its CSV form. Penalties are recovered up to an
    /// additive constant (`log theta(1) = 0`); the final state is taken from
    /// the last row and no flat-histogram events are attached.
    pub fn read_trace_csv<R: Read>(input: R) -> Result<Self> {
        let fmt_err = |msg: String| WlError::TraceFormat(msg);
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> =
            rdr.headers().map_err(|e| fmt_err(e.to_string()))?.iter().map(str::to_owned).collect();
        for (k, name) in ["t", "bin", "gamma", "kappa", "fh_event"].iter().enumerate() {
            if header.get(k).map(String::as_str) != Some(*name) {
                return Err(fmt_err(format!("expected column {name:?} at position {}", k + 1)));
            }
        }
        let d = header.iter().filter(|h| h.starts_with("visits_")).count();
        if d < 2 {
            return Err(fmt_err("trace needs visits_1 .. visits_d columns for d >= 2".into()));
        }
        let expected = Self::csv_header(d);
        if header != expected {
            return Err(fmt_err(format!("columns do not match a {d}-bin trace; expected {}", expected.join(","))));
        }
        let z_offset = 5;
        let visits_offset = z_offset + d * (d - 1) / 2;

        let mut records = Vec::new();
        for (line, row) in rdr.records().enumerate() {
            let row = row.map_err(|e| fmt_err(e.to_string()))?;
            let field = |k: usize| -> Result<&str> {
                row.get(k).ok_or_else(|| fmt_err(format!("row {} is missing column {}", line + 2, k + 1)))
            };
            let parse_err = |k: usize| fmt_err(format!("row {}: cannot parse column {}", line + 2, header[k]));
            let t: u64 = field(0)?.parse().map_err(|_| parse_err(0))?;
            let bin: usize = field(1)?.parse().map_err(|_| parse_err(1))?;
            if bin == 0 || bin > d {
                return Err(fmt_err(format!("row {}: bin {bin} outside 1..={d}", line + 2)));
            }
            let gamma: f64 = field(2)?.parse().map_err(|_| parse_err(2))?;
            let kappa: u32 = field(3)?.parse().map_err(|_| parse_err(3))?;
            let fh_event = match field(4)? {
                "0" => false,
                "1" => true,
                _ => return Err(parse_err(4)),
            };
            // z_1_j sits at offset j - 1 among the pair columns.
            let mut log_theta = vec![0.0; d];
            for (j, lt) in log_theta.iter_mut().enumerate().skip(1) {
                let z: f64 = field(z_offset + j - 1)?.parse().map_err(|_| parse_err(z_offset + j - 1))?;
                *lt = -z;
            }
            let visits = (0..d)
                .map(|i| field(visits_offset + i)?.parse::<u64>().map_err(|_| parse_err(visits_offset + i)))
                .collect::<Result<Vec<u64>>>()?;
            records.push(TraceRecord { t, bin: bin - 1, gamma, kappa, fh_event, log_theta, visits });
        }
        let last = records.last().ok_or_else(|| fmt_err("trace has no rows".into()))?.clone();
        let stride = if records.len() >= 2 { records[1].t - records[0].t } else { 1 };
        Ok(Self {
            d,
            stride,
            iterations: last.t,
            final_log_theta: last.log_theta.clone(),
            final_visits: last.visits.clone(),
            final_x: f64::NAN,
            final_gamma: last.gamma,
            final_kappa: last.kappa,
            accepted: 0,
            fh_events: Vec::new(),
            records,
            failure: None,
        })
    }

    pub fn read_fh_log_csv<R: Read>(input: R) -> Result<Vec<FhEvent>> {
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> =
            rdr.headers().map_err(|e| WlError::TraceFormat(e.to_string()))?.iter().map(str::to_owned).collect();
        if header != ["kappa", "t_global", "gamma_before", "gamma_after"] {
            return Err(WlError::TraceFormat(format!("unexpected FH log header {}", header.join(","))));
        }
        rdr.records()
            .map(|row| {
                let row = row.map_err(|e| WlError::TraceFormat(e.to_string()))?;
                let bad = || WlError::TraceFormat(format!("bad FH log row {:?}", row));
                Ok(FhEvent {
                    kappa: row[0].parse().map_err(|_| bad())?,
                    t: row[1].parse().map_err(|_| bad())?,
                    gamma_before: row[2].parse().map_err(|_| bad())?,
                    gamma_after: row[3].parse().map_err(|_| bad())?,
                })
            })
            .collect()
    }
}
