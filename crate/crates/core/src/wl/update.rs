use std::fmt;
use std::str::FromStr;

use num_traits::Num;

use crate::error::{Result, WlError};
use crate::kernel::PenaltyState;

/// Target visit proportions, one per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct DesiredFrequencies(Vec<f64>);

impl DesiredFrequencies {
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if phi.len() < 2 {
            return Err(WlError::Config(format!("need at least two frequencies, got {}", phi.len())));
        }
        if let Some(p) = phi.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(WlError::Config(format!("desired frequencies must lie in (0, 1), found {p}")));
        }
        let sum: f64 = phi.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(WlError::Config(format!("desired frequencies sum to {sum}, not 1")));
        }
        Ok(Self(phi))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Penalty update `log theta(i) += f(1{X_t in X_i}, phi_i, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateRule {
    /// `f(v, phi, gamma) = gamma (v - phi)`.
    Linear,
    /// `f(v, phi, gamma) = log(1 + gamma (v - phi))`.
    LogForm,
}

impl UpdateRule {
    /// The per-coordinate increment `f(visited, phi_i, gamma)`.
    pub fn increment(self, visited: bool, phi_i: f64, gamma: f64) -> f64 {
        let centered = if visited { 1.0 - phi_i } else { -phi_i };
        match self {
            UpdateRule::Linear => gamma * centered,
            UpdateRule::LogForm => (gamma * centered).ln_1p(),
        }
    }

    /// Checks `gamma > 0` and, for the log form, that every log argument
    /// `1 + gamma (v - phi_i)` stays positive.
    pub fn validate(self, phi: &DesiredFrequencies, gamma: f64) -> Result<()> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(WlError::Config(format!("gamma must be a positive finite number, got {gamma}")));
        }
        if self == UpdateRule::LogForm {
            let worst = phi.as_slice().iter().map(|&p| p.max(1.0 - p)).fold(0.0, f64::max);
            if gamma * worst >= 1.0 {
                return Err(WlError::Config(format!(
                    "log-form update needs gamma * max(phi_i, 1 - phi_i) < 1, got {gamma} * {worst}"
                )));
            }
        }
        Ok(())
    }

    pub fn name(self) -> &'static str {
        match self {
            UpdateRule::Linear => "linear",
            UpdateRule::LogForm => "logform",
        }
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpdateRule {
    type Err = WlError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(UpdateRule::Linear),
            "logform" | "log_form" | "log" => Ok(UpdateRule::LogForm),
            other => Err(WlError::Config(format!("unknown update rule {other:?}; expected \"linear\" or \"logform\""))),
        }
    }
}

/// `gamma (1{visited} - phi_i)` in any number type, so the identities of the
/// linear rule can be checked in exact rational arithmetic.
pub fn linear_increment<T: Num + Clone>(visited: bool, phi_i: &T, gamma: &T) -> T {
    let indicator = if visited { T::one() } else { T::zero() };
    gamma.clone() * (indicator - phi_i.clone())
}

/// Applies the linear rule in place and returns the increments it added.
pub fn linear_update<T: Num + Clone>(log_theta: &mut [T], bin: usize, phi: &[T], gamma: &T) -> Vec<T> {
    log_theta
        .iter_mut()
        .zip(phi)
        .enumerate()
        .map(|(i, (lt, p))| {
            let inc = linear_increment(i == bin, p, gamma);
            *lt = lt.clone() + inc.clone();
            inc
        })
        .collect()
}

impl PenaltyState {
    /// Unchecked in-place update; callers validate `gamma` once up front.
    pub(crate) fn update(&mut self, rule: UpdateRule, bin: usize, phi: &[f64], gamma: f64) {
        let lt = self.log_theta_mut();
        match rule {
            UpdateRule::Linear => {
                linear_update(lt, bin, phi, &gamma);
            }
            UpdateRule::LogForm => {
                for (i, (v, &p)) in lt.iter_mut().zip(phi).enumerate() {
                    *v += rule.increment(i == bin, p, gamma);
                }
            }
        }
    }
}

/// Returns the penalties after one update for a visit to `bin`.
pub fn apply_update(
    rule: UpdateRule,
    penalties: &PenaltyState,
    bin: usize,
    phi: &DesiredFrequencies,
    gamma: f64,
) -> Result<PenaltyState> {
    rule.validate(phi, gamma)?;
    if penalties.len() != phi.len() {
        return Err(WlError::Config(format!("{} penalties but {} desired frequencies", penalties.len(), phi.len())));
    }
    if bin >= phi.len() {
        return Err(WlError::Domain(format!("bin {bin} out of range for d = {}", phi.len())));
    }
    let mut next = penalties.clone();
    next.update(rule, bin, phi.as_slice(), gamma);
    Ok(next)
}
