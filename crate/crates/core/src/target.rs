//! Target densities on a compact interval and their bin partition.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, WlError};

type LogDensityFn = dyn Fn(f64) -> f64 + Send + Sync;

/// An unnormalized log-density on `[lo, hi]` together with a partition of
/// that interval into `d >= 2` bins.
///
/// Bin `0` is the closed interval `[e_0, e_1]`; every later bin `i` is the
/// half-open interval `(e_i, e_{i+1}]`. Boundary points have zero mass under
/// a continuous target, so the convention only matters for exact edge hits.
#[derive(Clone)]
pub struct PartitionedTarget {
    log_density: Arc<LogDensityFn>,
    edges: Vec<f64>,
    label: String,
}

impl fmt::Debug for PartitionedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartitionedTarget").field("label", &self.label).field("edges", &self.edges).finish()
    }
}

impl PartitionedTarget {
    /// Builds a target from an arbitrary log-density. Values returned outside
    /// the support are ignored; [`PartitionedTarget::log_density`] reports
    /// `-inf` there.
    pub fn new<F>(log_density: F, edges: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::with_label("custom", log_density, edges)
    }

    pub fn with_label<F>(label: impl Into<String>, log_density: F, edges: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if edges.len() < 3 {
            return Err(WlError::Config(format!("need at least two bins (three edges), got {} edges", edges.len())));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return Err(WlError::Config("bin edges must be finite".into()));
        }
        if let Some(w) = edges.windows(2).find(|w| w[0] >= w[1]) {
            return Err(WlError::Config(format!(
                "bin edges must be strictly increasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(Self { log_density: Arc::new(log_density), edges, label: label.into() })
    }

    /// Normal density with the given mean and standard deviation, truncated
    /// to the outer bin edges.
    pub fn truncated_normal(mean: f64, sd: f64, edges: Vec<f64>) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
            return Err(WlError::Config(format!(
                "truncated normal needs finite mean and sd > 0, got mean={mean}, sd={sd}"
            )));
        }
        let inv_var = 1.0 / (sd * sd);
        Self::with_label("truncated_normal", move |x| -0.5 * (x - mean) * (x - mean) * inv_var, edges)
    }

    /// Flat density over the support.
    pub fn uniform(edges: Vec<f64>) -> Result<Self> {
        Self::with_label("uniform", |_| 0.0, edges)
    }

    /// Equal-weight mixture of two normals, truncated to the support.
    pub fn bimodal(mean_a: f64, mean_b: f64, sd: f64, edges: Vec<f64>) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(WlError::Config(format!("bimodal target needs sd > 0, got {sd}")));
        }
        let inv_var = 1.0 / (sd * sd);
        Self::with_label(
            "bimodal",
            move |x| {
                let la = -0.5 * (x - mean_a) * (x - mean_a) * inv_var;
                let lb = -0.5 * (x - mean_b) * (x - mean_b) * inv_var;
                let hi = la.max(lb);
                hi + ((la - hi).exp() + (lb - hi).exp()).ln()
            },
            edges,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn num_bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn support(&self) -> (f64, f64) {
        (self.edges[0], self.edges[self.edges.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x >= lo && x <= hi
    }

    pub fn midpoint(&self) -> f64 {
        let (lo, hi) = self.support();
        0.5 * (lo + hi)
    }

    pub fn bin_width(&self, bin: usize) -> f64 {
        self.edges[bin + 1] - self.edges[bin]
    }

    /// Unnormalized `log pi(x)`, `-inf` outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        if self.contains(x) {
            (self.log_density)(x)
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Index of the bin containing `x` (zero-based).
    pub fn bin_of(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            let (lo, hi) = self.support();
            return Err(WlError::Domain(format!("{x} is outside the support [{lo}, {hi}]")));
        }
        // Number of interior edges strictly below x; bins are right-closed.
        let interior = &self.edges[1..self.edges.len() - 1];
        Ok(interior.partition_point(|&e| e < x))
    }
}

/// Current point of the sampled chain with its bin and cached log-density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainState {
    pub x: f64,
    pub bin: usize,
    pub log_pi_x: f64,
}

impl ChainState {
    pub fn new(target: &PartitionedTarget, x: f64) -> Result<Self> {
        let bin = target.bin_of(x)?;
        let log_pi_x = target.log_density(x);
        if log_pi_x.is_nan() || log_pi_x == f64::INFINITY {
            return Err(WlError::Domain(format!("log-density at {x} is {log_pi_x}")));
        }
        Ok(Self { x, bin, log_pi_x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> PartitionedTarget {
        PartitionedTarget::truncated_normal(0.0, 1.0, vec![-10.0, 0.0, 10.0]).unwrap()
    }

    #[test]
    fn bin_of_toy_partition() {
        let t = toy();
        assert_eq!(t.bin_of(-3.0).unwrap(), 0);
        assert_eq!(t.bin_of(0.0).unwrap(), 0);
        assert_eq!(t.bin_of(10.0).unwrap(), 1);
        assert_eq!(t.bin_of(-10.0).unwrap(), 0);
        assert_eq!(t.bin_of(1e-300).unwrap(), 1);
    }

    #[test]
    fn bin_of_rejects_points_outside_support() {
        let t = toy();
        assert!(matches!(t.bin_of(10.5), Err(WlError::Domain(_))));
        assert!(matches!(t.bin_of(f64::NAN), Err(WlError::Domain(_))));
        assert_eq!(t.log_density(-11.0), f64::NEG_INFINITY);
    }

    #[test]
    fn edges_are_validated() {
        assert!(PartitionedTarget::uniform(vec![0.0, 1.0]).is_err());
        assert!(PartitionedTarget::uniform(vec![0.0, 1.0, 1.0]).is_err());
        assert!(PartitionedTarget::uniform(vec![0.0, f64::INFINITY, 2.0]).is_err());
        assert!(PartitionedTarget::truncated_normal(0.0, 0.0, vec![0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn interior_edges_belong_to_the_left_bin() {
        let t = PartitionedTarget::uniform(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.bin_of(1.0).unwrap(), 0);
        assert_eq!(t.bin_of(2.0).unwrap(), 1);
        assert_eq!(t.bin_of(2.5).unwrap(), 2);
        assert_eq!(t.bin_of(3.0).unwrap(), 2);
    }

    #[test]
    fn bimodal_is_symmetric_for_symmetric_modes() {
        let t = PartitionedTarget::bimodal(-3.0, 3.0, 1.0, vec![-10.0, 0.0, 10.0]).unwrap();
        assert!((t.log_density(2.0) - t.log_density(-2.0)).abs() < 1e-14);
        assert!(t.log_density(3.0) > t.log_density(0.0));
    }
}
