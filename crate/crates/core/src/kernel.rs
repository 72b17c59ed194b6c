//! Penalties and the penalized Metropolis-Hastings kernel `K_theta`.

use rand::{Rng, RngCore};

use crate::error::{Result, WlError};
use crate::proposal::Proposal;
use crate::target::{ChainState, PartitionedTarget};

/// Log-domain penalties `log theta(i)`, one per bin.
///
/// Only differences between entries enter the kernel, so the vector is
/// defined up to an additive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyState {
    log_theta: Vec<f64>,
}

impl PenaltyState {
    /// `theta(i) = 1/d` for every bin.
    pub fn uniform(d: usize) -> Self {
        Self { log_theta: vec![-(d as f64).ln(); d] }
    }

    pub fn zeros(d: usize) -> Self {
        Self { log_theta: vec![0.0; d] }
    }

    pub fn from_log_theta(log_theta: Vec<f64>) -> Result<Self> {
        if log_theta.is_empty() {
            return Err(WlError::Config("penalty vector is empty".into()));
        }
        if let Some(v) = log_theta.iter().find(|v| !v.is_finite()) {
            return Err(WlError::Config(format!("penalties must be finite, found {v}")));
        }
        Ok(Self { log_theta })
    }

    pub fn log_theta(&self) -> &[f64] {
        &self.log_theta
    }

    pub(crate) fn log_theta_mut(&mut self) -> &mut [f64] {
        &mut self.log_theta
    }

    pub fn len(&self) -> usize {
        self.log_theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_theta.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.log_theta.iter().all(|v| v.is_finite())
    }

    /// `Z^{(i,j)} = log theta(i) - log theta(j)`.
    pub fn z(&self, i: usize, j: usize) -> f64 {
        self.log_theta[i] - self.log_theta[j]
    }

    /// All `Z^{(i,j)}` with `i < j`, in row-major pair order.
    pub fn z_pairs(&self) -> Vec<f64> {
        let d = self.len();
        let mut out = Vec::with_capacity(d * (d - 1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                out.push(self.z(i, j));
            }
        }
        out
    }

    pub fn shifted(&self, cst: f64) -> Self {
        Self { log_theta: self.log_theta.iter().map(|v| v + cst).collect() }
    }

    /// Subtracts the mean so the entries stay near zero.
    pub fn recenter(&mut self) {
        let mean = self.log_theta.iter().sum::<f64>() / self.len() as f64;
        self.log_theta.iter_mut().for_each(|v| *v -= mean);
    }
}

/// Unnormalized `log pi_theta(x) = log pi(x) - log theta(J(x))`.
pub fn penalized_log_density(target: &PartitionedTarget, penalties: &PenaltyState, x: f64) -> Result<f64> {
    let bin = target.bin_of(x)?;
    check_dims(target, penalties)?;
    Ok(target.log_density(x) - penalties.log_theta[bin])
}

pub(crate) fn check_dims(target: &PartitionedTarget, penalties: &PenaltyState) -> Result<()> {
    if penalties.len() != target.num_bins() {
        return Err(WlError::Config(format!(
            "penalty vector has {} entries but the target has {} bins",
            penalties.len(),
            target.num_bins()
        )));
    }
    Ok(())
}

/// Log of the MH ratio for moving `x -> y` under `pi_theta`, before clamping.
pub fn log_acceptance_ratio<P: Proposal + ?Sized>(
    target: &PartitionedTarget,
    proposal: &P,
    penalties: &PenaltyState,
    from: &ChainState,
    y: f64,
) -> f64 {
    let log_pi_y = target.log_density(y);
    if log_pi_y == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let to_bin = match target.bin_of(y) {
        Ok(b) => b,
        Err(_) => return f64::NEG_INFINITY,
    };
    let lt = &penalties.log_theta;
    log_pi_y - from.log_pi_x + proposal.log_q(y, from.x) - proposal.log_q(from.x, y) + lt[from.bin] - lt[to_bin]
}

/// One draw from `K_theta(x, .)`: propose, then accept with probability
/// `min(1, exp(log ratio))`. Proposals outside the support are rejected.
pub fn mh_step<P: Proposal + ?Sized, R: Rng>(
    target: &PartitionedTarget,
    proposal: &P,
    penalties: &PenaltyState,
    state: &ChainState,
    rng: &mut R,
) -> ChainState {
    let y = proposal.sample(state.x, rng as &mut dyn RngCore);
    let log_ratio = log_acceptance_ratio(target, proposal, penalties, state, y);
    if log_ratio == f64::NEG_INFINITY || log_ratio.is_nan() {
        return *state;
    }
    let log_alpha = log_ratio.min(0.0);
    if rng.random::<f64>() < log_alpha.exp() {
        ChainState {
            x: y,
            bin: target.bin_of(y).expect("finite density implies in support"),
            log_pi_x: target.log_density(y),
        }
    } else {
        *state
    }
}

/// Transition matrix of the penalized MH kernel on a finite state space.
///
/// `pi` holds unnormalized masses, `proposal[x][y]` the proposal matrix
/// (rows sum to one), `bins[x]` the bin of state `x`.
pub fn discrete_penalized_kernel(
    pi: &[f64],
    proposal: &[Vec<f64>],
    bins: &[usize],
    log_theta: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let n = pi.len();
    if proposal.len() != n || bins.len() != n || proposal.iter().any(|row| row.len() != n) {
        return Err(WlError::Config("state, proposal and bin dimensions disagree".into()));
    }
    if let Some(&b) = bins.iter().find(|&&b| b >= log_theta.len()) {
        return Err(WlError::Domain(format!("bin {b} has no penalty")));
    }
    let pi_theta: Vec<f64> = (0..n).map(|x| pi[x] * (-log_theta[bins[x]]).exp()).collect();
    let mut k = vec![vec![0.0; n]; n];
    for x in 0..n {
        let mut off_diag = 0.0;
        for y in 0..n {
            if x == y || proposal[x][y] == 0.0 {
                continue;
            }
            let ratio = (pi_theta[y] * proposal[y][x]) / (pi_theta[x] * proposal[x][y]);
            k[x][y] = proposal[x][y] * ratio.min(1.0);
            off_diag += k[x][y];
        }
        k[x][x] = 1.0 - off_diag;
    }
    Ok(k)
}
