use rand::Rng;

use super::bounding::{Increment, TwoStateChain};
use crate::error::{Result, WlError};
use crate::kernel::{mh_step, PenaltyState};
use crate::proposal::Proposal;
use crate::target::{ChainState, PartitionedTarget};

/// Law of the next true increment given the previous one (at a fixed `Z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalLaw {
    /// `P[U' = -b | U = +a]`.
    pub p_down_after_up: f64,
    /// `P[U' = -b | U = -b]`.
    pub p_down_after_down: f64,
}

impl ConditionalLaw {
    pub fn new(p_down_after_up: f64, p_down_after_down: f64) -> Result<Self> {
        for p in [p_down_after_up, p_down_after_down] {
            if !(0.0..=1.0).contains(&p) {
                return Err(WlError::Config(format!("conditional probability {p} outside [0, 1]")));
            }
        }
        Ok(Self { p_down_after_up, p_down_after_down })
    }

    pub fn p_down(&self, prev: Increment) -> f64 {
        match prev {
            Increment::Up => self.p_down_after_up,
            Increment::Down => self.p_down_after_down,
        }
    }

    /// `P[-b | +a] > epsilon` and `P[-b | -b] > 1 - eta`.
    pub fn satisfies_bounds(&self, epsilon: f64, eta: f64) -> bool {
        self.p_down_after_up > epsilon && self.p_down_after_down > 1.0 - eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingProbabilities {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl CouplingProbabilities {
    pub fn new(law: &ConditionalLaw, chain: &TwoStateChain) -> Result<Self> {
        let (eps, eta) = (chain.epsilon, chain.eta);
        let r_a = law.p_down_after_up;
        let r_b = law.p_down_after_down;
        let p1 = (1.0 - eta) / r_b;
        let p2 = eps / r_a;
        let p3 = eps * (1.0 + (1.0 - r_b) / r_b);
        for (name, value) in [("p1", p1), ("p2", p2), ("p3", p3)] {
            if !(value <= 1.0) {
                return Err(WlError::CouplingDomination { name, value });
            }
        }
        Ok(Self { p1, p2, p3 })
    }
}

/// Previous true increment `u` and bounding increment `u_tilde`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledState {
    pub u: Increment,
    pub u_tilde: Increment,
}

impl CoupledState {
    pub fn start() -> Self {
        Self { u: Increment::Up, u_tilde: Increment::Up }
    }

    pub fn dominated(&self) -> bool {
        !(self.u == Increment::Up && self.u_tilde == Increment::Down)
    }
}

/// Draws the next true increment from `law`, then the bounding increment:
/// `+a` whenever `U' = +a`, otherwise `-b` with probability p1, p2 or p3
/// depending on the previous pair.
pub fn coupled_pair_step<R: Rng + ?Sized>(
    state: CoupledState,
    law: &ConditionalLaw,
    probs: &CouplingProbabilities,
    rng: &mut R,
) -> Result<CoupledState> {
    let u = if rng.random::<f64>() < law.p_down(state.u) { Increment::Down } else { Increment::Up };
    if u == Increment::Up {
        return Ok(CoupledState { u, u_tilde: Increment::Up });
    }
    let p = match (state.u, state.u_tilde) {
        (Increment::Down, Increment::Down) => probs.p1,
        (Increment::Up, Increment::Up) => probs.p2,
        (Increment::Down, Increment::Up) => probs.p3,
        (Increment::Up, Increment::Down) => {
            return Err(WlError::Domain("coupled state has U = +a above U~ = -b".into()))
        }
    };
    let u_tilde = if rng.random::<f64>() < p { Increment::Down } else { Increment::Up };
    Ok(CoupledState { u, u_tilde })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub steps: u64,
    pub violations: u64,
    /// `transitions[i][j]`: count of `U~` moving from state i to j (0 = +a).
    pub transitions: [[u64; 2]; 2],
    pub probabilities: CouplingProbabilities,
}

impl CouplingReport {
    pub fn empirical_matrix(&self) -> [[f64; 2]; 2] {
        let mut m = [[f64::NAN; 2]; 2];
        for i in 0..2 {
            let n = (self.transitions[i][0] + self.transitions[i][1]) as f64;
            if n > 0.0 {
                for j in 0..2 {
                    m[i][j] = self.transitions[i][j] as f64 / n;
                }
            }
        }
        m
    }

    /// Largest `|empirical - expected| / se` over the four cells.
    pub fn max_z_score(&self, chain: &TwoStateChain) -> f64 {
        let expected = chain.transition_matrix();
        let emp = self.empirical_matrix();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let n = (self.transitions[i][0] + self.transitions[i][1]) as f64;
            for j in 0..2 {
                let p = expected[i][j];
                let se = (p * (1.0 - p) / n).sqrt();
                let z = if se > 0.0 {
                    (emp[i][j] - p).abs() / se
                } else if emp[i][j] == p {
                    0.0
                } else {
                    f64::INFINITY
                };
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Runs `steps` coupled steps from `(+a, +a)`.
pub fn run_coupling<R: Rng + ?Sized>(
    law: &ConditionalLaw,
    chain: &TwoStateChain,
    steps: u64,
    rng: &mut R,
) -> Result<CouplingReport> {
    let probabilities = CouplingProbabilities::new(law, chain)?;
    let mut state = CoupledState::start();
    let mut transitions = [[0u64; 2]; 2];
    let mut violations = 0;
    for _ in 0..steps {
        let next = coupled_pair_step(state, law, &probabilities, rng)?;
        if !next.dominated() {
            violations += 1;
        }
        transitions[state.u_tilde.index()][next.u_tilde.index()] += 1;
        state = next;
    }
    Ok(CouplingReport { steps, violations, transitions, probabilities })
}

/// Conditional law of the bin sequence of the penalized sampler with the
/// two-bin penalty frozen at `Z = z`; bin 0 plays the role of `+a`.
/// Returns the law and the number of transitions out of each state.
pub fn estimate_conditional_law<P: Proposal + ?Sized, R: Rng>(
    target: &PartitionedTarget,
    proposal: &P,
    z: f64,
    x0: f64,
    steps: u64,
    rng: &mut R,
) -> Result<(ConditionalLaw, [u64; 2])> {
    if target.num_bins() != 2 {
        return Err(WlError::Unsupported(format!("need 2 bins, target has {}", target.num_bins())));
    }
    let penalties = PenaltyState::from_log_theta(vec![z / 2.0, -z / 2.0])?;
    let mut state = ChainState::new(target, x0)?;
    for _ in 0..steps / 10 {
        state = mh_step(target, proposal, &penalties, &state, rng);
    }
    let mut counts = [[0u64; 2]; 2];
    for _ in 0..steps {
        let next = mh_step(target, proposal, &penalties, &state, rng);
        counts[state.bin][next.bin] += 1;
        state = next;
    }
    let from = [counts[0][0] + counts[0][1], counts[1][0] + counts[1][1]];
    if from.contains(&0) {
        return Err(WlError::Diagnostic(format!("a bin was never left or entered at Z = {z}: {counts:?}")));
    }
    let law = ConditionalLaw::new(counts[0][1] as f64 / from[0] as f64, counts[1][1] as f64 / from[1] as f64)?;
    Ok((law, from))
}

/// Smallest `z` on `grid` (scanned in order) at which the estimated law
/// satisfies the bounds for `chain`. Empirical; not a proof of the bound.
pub fn find_threshold<P: Proposal + ?Sized, R: Rng>(
    target: &PartitionedTarget,
    proposal: &P,
    chain: &TwoStateChain,
    grid: &[f64],
    x0: f64,
    steps: u64,
    rng: &mut R,
) -> Result<Option<(f64, ConditionalLaw)>> {
    for &z in grid {
        match estimate_conditional_law(target, proposal, z, x0, steps, rng) {
            Ok((law, _)) if law.satisfies_bounds(chain.epsilon, chain.eta) => return Ok(Some((z, law))),
            Ok(_) | Err(WlError::Diagnostic(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proposal::GaussianRandomWalk;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain() -> TwoStateChain {
        TwoStateChain::new(0.3, 0.1, 1.0, 1.0).unwrap()
    }

    #[test]
    fn probabilities_and_domination_error() {
        let law = ConditionalLaw::new(0.4, 0.95).unwrap();
        let p = CouplingProbabilities::new(&law, &chain()).unwrap();
        assert!((p.p1 - 0.9 / 0.95).abs() < 1e-15);
        assert!((p.p2 - 0.75).abs() < 1e-15);
        assert!((p.p3 - 0.3 / 0.95).abs() < 1e-15);
        let bad = ConditionalLaw::new(0.2, 0.95).unwrap();
        assert!(matches!(
            CouplingProbabilities::new(&bad, &chain()),
            Err(WlError::CouplingDomination { name: "p2", .. })
        ));
    }

    #[test]
    fn up_draw_forces_up() {
        let law = ConditionalLaw::new(0.31, 0.91).unwrap();
        let probs = CouplingProbabilities::new(&law, &chain()).unwrap();
        let always_up = ConditionalLaw { p_down_after_up: 0.0, p_down_after_down: 0.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = coupled_pair_step(CoupledState::start(), &always_up, &probs, &mut rng).unwrap();
            assert_eq!(s, CoupledState::start());
        }
    }

    #[test]
    fn invalid_pair_rejected() {
        let law = ConditionalLaw::new(1.0, 1.0).unwrap();
        let probs = CouplingProbabilities::new(&law, &chain()).unwrap();
        let bad = CoupledState { u: Increment::Up, u_tilde: Increment::Down };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(coupled_pair_step(bad, &law, &probs, &mut rng).is_err());
    }

    #[test]
    fn live_law_moves_away_from_penalized_bin() {
        let target = PartitionedTarget::truncated_normal(0.0, 1.0, vec![-10.0, 0.0, 10.0]).unwrap();
        let q = GaussianRandomWalk::new(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (low, _) = estimate_conditional_law(&target, &q, 0.0, 0.0, 50_000, &mut rng).unwrap();
        let (high, _) = estimate_conditional_law(&target, &q, 4.0, 0.0, 50_000, &mut rng).unwrap();
        assert!(high.p_down_after_up > low.p_down_after_up);
        assert!(high.p_down_after_down > low.p_down_after_down);
    }
}
