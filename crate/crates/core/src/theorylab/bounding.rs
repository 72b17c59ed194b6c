use std::fmt;

use rand::Rng;

use crate::error::{Result, WlError};

/// State of a two-valued increment process: `+a` or `-b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Increment {
    Up,
    Down,
}

impl Increment {
    pub fn index(self) -> usize {
        match self {
            Increment::Up => 0,
            Increment::Down => 1,
        }
    }
}

impl fmt::Display for Increment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Increment::Up => "+a",
            Increment::Down => "-b",
        })
    }
}

/// Markov chain on `{+a, -b}` with transition matrix
/// `[[1 - epsilon, epsilon], [eta, 1 - eta]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateChain {
    pub epsilon: f64,
    pub eta: f64,
    pub a: f64,
    pub b: f64,
}

impl TwoStateChain {
    pub fn new(epsilon: f64, eta: f64, a: f64, b: f64) -> Result<Self> {
        for (name, p) in [("epsilon", epsilon), ("eta", eta)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(WlError::Config(format!("{name} must be a probability, got {p}")));
            }
        }
        for (name, v) in [("a", a), ("b", b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(WlError::Config(format!("step {name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { epsilon, eta, a, b })
    }

    pub fn transition_matrix(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.epsilon, self.epsilon], [self.eta, 1.0 - self.eta]]
    }

    pub fn prob(&self, from: Increment, to: Increment) -> f64 {
        self.transition_matrix()[from.index()][to.index()]
    }

    pub fn value(&self, s: Increment) -> f64 {
        match s {
            Increment::Up => self.a,
            Increment::Down => -self.b,
        }
    }

    /// `(eta, epsilon) / (epsilon + eta)`.
    pub fn stationary(&self) -> Result<[f64; 2]> {
        let total = self.epsilon + self.eta;
        if total == 0.0 {
            return Err(WlError::Domain("epsilon = eta = 0: both states are absorbing".into()));
        }
        Ok([self.eta / total, self.epsilon / total])
    }

    /// Mean increment under the stationary law.
    pub fn stationary_drift(&self) -> Result<f64> {
        let [up, down] = self.stationary()?;
        Ok(self.a * up - self.b * down)
    }

    /// `a * eta < b * epsilon`, under which the partial sums return below
    /// any level in finite expected time.
    pub fn has_negative_drift(&self) -> bool {
        self.a * self.eta < self.b * self.epsilon
    }

    /// Parameters usable for the bounding construction:
    /// `epsilon < 1/2` and `eta < min(1/2, epsilon b / a)`.
    pub fn in_bounding_regime(&self) -> bool {
        self.epsilon < 0.5 && self.eta < 0.5_f64.min(self.epsilon * self.b / self.a)
    }

    pub fn step<R: Rng + ?Sized>(&self, from: Increment, rng: &mut R) -> Increment {
        let switch = match from {
            Increment::Up => self.epsilon,
            Increment::Down => self.eta,
        };
        let flip = rng.random::<f64>() < switch;
        match (from, flip) {
            (Increment::Up, false) | (Increment::Down, true) => Increment::Up,
            _ => Increment::Down,
        }
    }
}

/// The `steps` states following `start`.
pub fn simulate_bounding_chain<R: Rng + ?Sized>(
    chain: &TwoStateChain,
    start: Increment,
    steps: usize,
    rng: &mut R,
) -> Vec<Increment> {
    let mut s = start;
    (0..steps)
        .map(|_| {
            s = chain.step(s, rng);
            s
        })
        .collect()
}

/// Empirical occupation and mean increment of a simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingSummary {
    pub steps: usize,
    pub up_fraction: f64,
    pub down_fraction: f64,
    pub mean_increment: f64,
}

impl BoundingSummary {
    pub fn from_path(chain: &TwoStateChain, path: &[Increment]) -> Self {
        let n = path.len().max(1) as f64;
        let ups = path.iter().filter(|&&s| s == Increment::Up).count() as f64;
        let total: f64 = path.iter().map(|&s| chain.value(s)).sum();
        Self { steps: path.len(), up_fraction: ups / n, down_fraction: 1.0 - ups / n, mean_increment: total / n }
    }
}
