use super::lattice::{LatticePoint, RationalFrequencies};
use crate::diagnostics::check_assumptions;
use crate::error::{Result, WlError};
use crate::kernel::{mh_step, PenaltyState};
use crate::proposal::Proposal;
use crate::seeds::run_replicas;
use crate::target::{ChainState, PartitionedTarget};
use crate::wl::UpdateRule;

const DIAGNOSTIC_GRID: usize = 401;

#[derive(Debug, Clone, PartialEq)]
pub struct PathRealization {
    pub counts: Vec<u64>,
    pub trials: u64,
    pub realized: u64,
}

impl PathRealization {
    pub fn fraction(&self) -> f64 {
        self.realized as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrreducibilityReport {
    pub gamma: f64,
    pub x0: f64,
    pub paths: Vec<PathRealization>,
    /// Violations of the non-empty-bin and bounded-ratio assumptions.
    pub warnings: Vec<String>,
}

/// For each count vector `n`, runs `trials` independent paths of `sum(n)`
/// steps of the linear-rule sampler at fixed `gamma` (penalties start at 0,
/// chain at `x0`) and counts how many visit bin `i` exactly `n_i` times.
#[allow(clippy::too_many_arguments)]
pub fn irreducibility_smoke_test<P: Proposal + ?Sized>(
    target: &PartitionedTarget,
    proposal: &P,
    phi: &RationalFrequencies,
    gamma: f64,
    x0: f64,
    counts: &[LatticePoint],
    trials: u64,
    seed: u64,
) -> Result<IrreducibilityReport> {
    let d = target.num_bins();
    if phi.len() != d {
        return Err(WlError::Config(format!("phi has {} entries, target has {d} bins", phi.len())));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(WlError::Config(format!("gamma must be positive, got {gamma}")));
    }
    if trials == 0 {
        return Err(WlError::Config("trials must be positive".into()));
    }
    let start = ChainState::new(target, x0)?;
    let phi_f = phi.to_f64();
    let mut paths = Vec::with_capacity(counts.len());
    for (idx, n) in counts.iter().enumerate() {
        if n.counts.len() != d {
            return Err(WlError::Domain(format!("count vector {n} has wrong length for d = {d}")));
        }
        let steps = n.total();
        let per_trial = run_replicas(seed.wrapping_add(idx as u64), trials as usize, |_, rng| {
            let mut penalties = PenaltyState::zeros(d);
            let mut state = start;
            let mut visits = vec![0u64; d];
            for _ in 0..steps {
                state = mh_step(target, proposal, &penalties, &state, rng);
                visits[state.bin] += 1;
                if visits[state.bin] > n.counts[state.bin] {
                    return false;
                }
                penalties.update(UpdateRule::Linear, state.bin, &phi_f, gamma);
            }
            visits == n.counts
        });
        let realized = per_trial.iter().filter(|&&ok| ok).count() as u64;
        paths.push(PathRealization { counts: n.counts.clone(), trials, realized });
    }
    let warnings = check_assumptions(target, proposal, DIAGNOSTIC_GRID)?.warnings();
    Ok(IrreducibilityReport { gamma, x0, paths, warnings })
}
