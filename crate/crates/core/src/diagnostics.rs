//! Grid-based checks of the regularity assumptions behind the
//! finite-time flat-histogram result: non-empty bins, compact support,
//! a proposal density bounded below, and an MH ratio bounded on both sides.
//!
//! All bounds are minima and maxima over a finite grid and are therefore
//! approximations of the true infimum and supremum.

use crate::error::{Result, WlError};
use crate::proposal::Proposal;
use crate::target::PartitionedTarget;

#[derive(Debug, Clone, PartialEq)]
pub struct BinDiagnostic {
    pub bin: usize,
    pub width: f64,
    /// Share of the grid-estimated `pi` mass that falls in this bin.
    pub pi_mass_fraction: f64,
    pub lebesgue_positive: bool,
    pub pi_mass_positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub grid_size: usize,
    pub support: (f64, f64),
    pub compact: bool,
    pub bins: Vec<BinDiagnostic>,
    /// Smallest `Q(x, y)` seen on the grid.
    pub q_min: f64,
    pub log_q_min: f64,
    /// Bounds of `pi(y) Q(y,x) / (pi(x) Q(x,y))` over grid pairs with `pi(x) > 0`.
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub log_ratio_min: f64,
    pub log_ratio_max: f64,
}

impl AssumptionReport {
    pub fn bins_nonempty(&self) -> bool {
        self.bins.iter().all(|b| b.lebesgue_positive && b.pi_mass_positive)
    }

    pub fn proposal_bounded_below(&self) -> bool {
        self.q_min > 0.0
    }

    pub fn ratio_bounded(&self) -> bool {
        self.ratio_min > 0.0 && self.ratio_max.is_finite()
    }

    pub fn all_hold(&self) -> bool {
        self.compact && self.bins_nonempty() && self.proposal_bounded_below() && self.ratio_bounded()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.bins {
            if !b.lebesgue_positive {
                out.push(format!("bin {} has zero width", b.bin + 1));
            }
            if !b.pi_mass_positive {
                out.push(format!("bin {} carries no target mass on the grid (empty bin)", b.bin + 1));
            }
        }
        if !self.proposal_bounded_below() {
            out.push("proposal density underflows to zero on the grid (no q_min > 0)".into());
        }
        if !self.ratio_bounded() {
            out.push(format!(
                "MH ratio is not bounded on both sides: grid range [{:e}, {:e}]",
                self.ratio_min, self.ratio_max
            ));
        }
        out
    }
}

/// Scans a uniform `grid_size x grid_size` grid over `support x support`.
pub fn check_assumptions<P: Proposal + ?Sized>(
    target: &PartitionedTarget,
    proposal: &P,
    grid_size: usize,
) -> Result<AssumptionReport> {
    if grid_size < 2 {
        return Err(WlError::Config(format!("grid size must be at least 2, got {grid_size}")));
    }
    let (lo, hi) = target.support();
    let step = (hi - lo) / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size).map(|k| if k == grid_size - 1 { hi } else { lo + k as f64 * step }).collect();
    let log_pi: Vec<f64> = grid.iter().map(|&x| target.log_density(x)).collect();
    if !log_pi.iter().any(|v| v.is_finite()) {
        return Err(WlError::Diagnostic("log-density is not finite anywhere on the grid".into()));
    }

    let mut log_q_min = f64::INFINITY;
    let mut log_ratio_min = f64::INFINITY;
    let mut log_ratio_max = f64::NEG_INFINITY;
    for (ix, &x) in grid.iter().enumerate() {
        for (iy, &y) in grid.iter().enumerate() {
            let lq_xy = proposal.log_q(x, y);
            log_q_min = log_q_min.min(lq_xy);
            if !log_pi[ix].is_finite() {
                continue;
            }
            let lr = log_pi[iy] - log_pi[ix] + proposal.log_q(y, x) - lq_xy;
            if lr.is_nan() {
                continue;
            }
            log_ratio_min = log_ratio_min.min(lr);
            log_ratio_max = log_ratio_max.max(lr);
        }
    }

    let peak = log_pi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let d = target.num_bins();
    let mut mass = vec![0.0; d];
    for (&x, &lp) in grid.iter().zip(&log_pi) {
        if lp.is_finite() {
            mass[target.bin_of(x)?] += (lp - peak).exp();
        }
    }
    let total: f64 = mass.iter().sum();
    let bins = (0..d)
        .map(|i| BinDiagnostic {
            bin: i,
            width: target.bin_width(i),
            pi_mass_fraction: mass[i] / total,
            lebesgue_positive: target.bin_width(i) > 0.0,
            pi_mass_positive: mass[i] > 0.0,
        })
        .collect();

    Ok(AssumptionReport {
        grid_size,
        support: (lo, hi),
        compact: lo.is_finite() && hi.is_finite(),
        bins,
        q_min: log_q_min.exp(),
        log_q_min,
        ratio_min: log_ratio_min.exp(),
        ratio_max: log_ratio_max.exp(),
        log_ratio_min,
        log_ratio_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proposal::GaussianRandomWalk;

    #[test]
    fn toy_target_satisfies_all_assumptions() {
        let t = PartitionedTarget::truncated_normal(0.0, 1.0, vec![-10.0, 0.0, 10.0]).unwrap();
        let q = GaussianRandomWalk::new(1.0).unwrap();
        let r = check_assumptions(&t, &q, 101).unwrap();
        assert!(r.all_hold(), "{:?}", r.warnings());
        assert!(r.ratio_min > 0.0 && r.ratio_max < f64::INFINITY);
        // pi(10)/pi(0) = exp(-50) is the extreme ratio.
        assert!((r.log_ratio_min + 50.0).abs() < 1e-9);
        assert!((r.log_ratio_max - 50.0).abs() < 1e-9);
        assert!((r.bins[0].pi_mass_fraction - 0.5).abs() < 0.05);
    }

    #[test]
    fn uniform_target_has_unit_ratio_bounds() {
        let t = PartitionedTarget::uniform(vec![0.0, 0.5, 1.0]).unwrap();
        let q = GaussianRandomWalk::new(0.3).unwrap();
        let r = check_assumptions(&t, &q, 41).unwrap();
        assert_eq!(r.ratio_min, 1.0);
        assert_eq!(r.ratio_max, 1.0);
    }

    #[test]
    fn zero_density_bin_is_flagged() {
        let t =
            PartitionedTarget::new(|x| if x > 0.0 { f64::NEG_INFINITY } else { 0.0 }, vec![-1.0, 0.0, 1.0]).unwrap();
        let q = GaussianRandomWalk::new(1.0).unwrap();
        let r = check_assumptions(&t, &q, 21).unwrap();
        assert!(!r.bins[1].pi_mass_positive);
        assert!(!r.bins_nonempty());
        assert!(!r.ratio_bounded());
        assert!(r.warnings().iter().any(|w| w.contains("bin 2")));
    }

    #[test]
    fn nowhere_finite_density_is_a_diagnostic_failure() {
        let t = PartitionedTarget::new(|_| f64::NEG_INFINITY, vec![0.0, 1.0, 2.0]).unwrap();
        let q = GaussianRandomWalk::new(1.0).unwrap();
        assert!(matches!(check_assumptions(&t, &q, 5), Err(WlError::Diagnostic(_))));
        assert!(matches!(check_assumptions(&t, &q, 1), Err(WlError::Config(_))));
    }
}
