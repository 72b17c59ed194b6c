//! Proposal kernels for the Metropolis-Hastings step.

use std::f64::consts::PI;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use crate::error::{Result, WlError};

/// A proposal density `Q(x, .)` and a sampler drawing from it.
///
/// `log_q` and `sample` must describe the same distribution; the acceptance
/// ratio relies on it.
pub trait Proposal: Send + Sync {
    fn log_q(&self, x: f64, y: f64) -> f64;
    fn sample(&self, x: f64, rng: &mut dyn RngCore) -> f64;
}

impl<P: Proposal + ?Sized> Proposal for Box<P> {
    fn log_q(&self, x: f64, y: f64) -> f64 {
        (**self).log_q(x, y)
    }

    fn sample(&self, x: f64, rng: &mut dyn RngCore) -> f64 {
        (**self).sample(x, rng)
    }
}

/// Gaussian random walk `y ~ N(x, scale^2)`. Not truncated: proposals that
/// leave the support are rejected by the kernel.
#[derive(Debug, Clone)]
pub struct GaussianRandomWalk {
    scale: f64,
    log_norm: f64,
    normal: Normal<f64>,
}

impl GaussianRandomWalk {
    pub fn new(scale: f64) -> Result<Self> {
        let normal = Normal::new(0.0, scale).map_err(|e| WlError::Config(format!("random walk scale {scale}: {e}")))?;
        if !(scale > 0.0) {
            return Err(WlError::Config(format!("random walk scale must be > 0, got {scale}")));
        }
        Ok(Self { scale, log_norm: -(scale * (2.0 * PI).sqrt()).ln(), normal })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Proposal for GaussianRandomWalk {
    fn log_q(&self, x: f64, y: f64) -> f64 {
        let r = (y - x) / self.scale;
        self.log_norm - 0.5 * r * r
    }

    fn sample(&self, x: f64, rng: &mut dyn RngCore) -> f64 {
        x + self.normal.sample(rng)
    }
}

/// Independent uniform proposal over `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct IndependentUniform {
    lo: f64,
    hi: f64,
}

impl IndependentUniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(WlError::Config(format!("uniform proposal needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }
}

impl Proposal for IndependentUniform {
    fn log_q(&self, _x: f64, y: f64) -> f64 {
        if y >= self.lo && y <= self.hi {
            -(self.hi - self.lo).ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn sample(&self, _x: f64, rng: &mut dyn RngCore) -> f64 {
        rng.random_range(self.lo..=self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_walk_is_symmetric() {
        let q = GaussianRandomWalk::new(1.3).unwrap();
        for &(x, y) in &[(0.0, 1.0), (-4.2, 3.3), (9.9, -9.9), (0.1, 0.1)] {
            assert_eq!(q.log_q(x, y), q.log_q(y, x));
        }
    }

    #[test]
    fn gaussian_walk_density_matches_sampler_moments() {
        let q = GaussianRandomWalk::new(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| q.sample(1.0, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
        assert!((var - 4.0).abs() < 0.05, "var {var}");
        // The density integrates to one.
        let h = 1e-3;
        let mass: f64 = (-20_000..20_000).map(|k| q.log_q(0.0, k as f64 * h).exp() * h).sum();
        assert!((mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_scales_are_rejected() {
        assert!(GaussianRandomWalk::new(0.0).is_err());
        assert!(GaussianRandomWalk::new(-1.0).is_err());
        assert!(IndependentUniform::new(1.0, 1.0).is_err());
    }

    #[test]
    fn uniform_proposal_stays_in_range() {
        let q = IndependentUniform::new(-1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let y = q.sample(0.0, &mut rng);
            assert!((-1.0..=2.0).contains(&y));
            assert_eq!(q.log_q(0.0, y), -(3.0f64).ln());
        }
    }
}
