use crate::error::{Result, WlError};
use crate::wl::update::DesiredFrequencies;

/// `gamma_t = t^{-alpha}`, which satisfies `sum gamma = inf` and
/// `sum gamma^2 < inf` only for `alpha` in `(0.5, 1)`.
pub fn deterministic_gamma(t: u64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(WlError::Config(format!("schedule exponent alpha must lie in (0.5, 1), got {alpha}")));
    }
    if t == 0 {
        return Err(WlError::Config("deterministic schedule starts at t = 1".into()));
    }
    Ok((t as f64).powf(-alpha))
}

/// Schedule decreased only at flat-histogram events:
/// `gamma_k = gamma0 * decay^min(k, cap)` and `c_k = c * c_decay^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatHistogramSchedule {
    pub gamma0: f64,
    pub decay: f64,
    pub c: f64,
    pub c_decay: f64,
    /// Number of events after which `gamma` stops decreasing. `Some(0)` pins
    /// `gamma` at `gamma0` while events are still detected and logged.
    pub max_decreases: Option<u32>,
    /// The criterion is only evaluated once at least this many iterations
    /// have elapsed since the last reset. `1` checks every iteration.
    pub min_samples: u64,
}

impl FlatHistogramSchedule {
    /// Halving schedule, fixed threshold, checked every iteration.
    pub fn halving(gamma0: f64, c: f64) -> Self {
        Self { gamma0, decay: 0.5, c, c_decay: 1.0, max_decreases: None, min_samples: 1 }
    }

    /// `gamma` held at `gamma0` for the whole run.
    pub fn pinned(gamma0: f64, c: f64) -> Self {
        Self { max_decreases: Some(0), ..Self::halving(gamma0, c) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return Err(WlError::Config(format!("gamma0 must be > 0, got {}", self.gamma0)));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(WlError::Config(format!("gamma decay must lie in (0, 1), got {}", self.decay)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(WlError::Config(format!("flat-histogram threshold c must be > 0, got {}", self.c)));
        }
        if !(self.c_decay > 0.0 && self.c_decay <= 1.0) {
            return Err(WlError::Config(format!("threshold decay must lie in (0, 1], got {}", self.c_decay)));
        }
        if self.min_samples == 0 {
            return Err(WlError::Config("min_samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn gamma(&self, kappa: u32) -> f64 {
        let k = self.max_decreases.map_or(kappa, |cap| kappa.min(cap));
        self.gamma0 * self.decay.powi(k as i32)
    }

    pub fn threshold(&self, kappa: u32) -> f64 {
        self.c * self.c_decay.powi(kappa as i32)
    }

    /// True when the criterion can already hold after a single iteration.
    pub fn is_degenerate(&self, phi: &DesiredFrequencies) -> bool {
        let tightest = phi.as_slice().iter().map(|&p| p.min(1.0 - p)).fold(f64::INFINITY, f64::min);
        self.c >= tightest
    }
}

/// Schedule bookkeeping of the flat-histogram driver.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleState {
    pub gamma: f64,
    pub kappa: u32,
    /// Visits per bin since the last reset.
    pub nu: Vec<u64>,
    pub t_since_reset: u64,
    pub c: f64,
}

impl ScheduleState {
    pub fn new(d: usize, schedule: &FlatHistogramSchedule) -> Self {
        Self { gamma: schedule.gamma(0), kappa: 0, nu: vec![0; d], t_since_reset: 0, c: schedule.threshold(0) }
    }

    pub fn record_visit(&mut self, bin: usize) {
        self.nu[bin] += 1;
        self.t_since_reset += 1;
    }

    /// Registers a flat-histogram event: bumps `kappa`, resets the counters
    /// and moves `gamma` and `c` to their next values. Returns the old gamma.
    pub fn advance(&mut self, schedule: &FlatHistogramSchedule) -> f64 {
        let before = self.gamma;
        self.kappa += 1;
        self.nu.iter_mut().for_each(|n| *n = 0);
        self.t_since_reset = 0;
        self.gamma = schedule.gamma(self.kappa);
        self.c = schedule.threshold(self.kappa);
        before
    }
}

/// `max_i |nu_i / t - phi_i| < c`, with `t` the iterations since the last reset.
pub fn fh_met(state: &ScheduleState, phi: &DesiredFrequencies) -> bool {
    if state.t_since_reset == 0 {
        return false;
    }
    let t = state.t_since_reset as f64;
    state.nu.iter().zip(phi.as_slice()).all(|(&n, &p)| (n as f64 / t - p).abs() < state.c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(nu: &[u64], c: f64) -> ScheduleState {
        ScheduleState { gamma: 1.0, kappa: 0, nu: nu.to_vec(), t_since_reset: nu.iter().sum(), c }
    }

    #[test]
    fn deterministic_schedule_values() {
        assert_eq!(deterministic_gamma(1, 0.6).unwrap(), 1.0);
        assert!((deterministic_gamma(1024, 0.6).unwrap() - 0.015625).abs() < 1e-15);
        assert!(deterministic_gamma(10, 0.4).is_err());
        assert!(deterministic_gamma(10, 1.0).is_err());
        assert!(deterministic_gamma(0, 0.6).is_err());
    }

    #[test]
    fn flat_histogram_criterion() {
        let phi = DesiredFrequencies::new(vec![0.75, 0.25]).unwrap();
        assert!(fh_met(&state(&[75, 25], 0.01), &phi));
        assert!(!fh_met(&state(&[80, 20], 0.01), &phi));
        assert!(fh_met(&state(&[76, 24], 0.02), &phi));
        assert!(!fh_met(&state(&[0, 0], 0.5), &phi));
    }

    #[test]
    fn halving_and_pinned_schedules() {
        let s = FlatHistogramSchedule::halving(1.0, 0.05);
        assert_eq!(s.gamma(0), 1.0);
        assert_eq!(s.gamma(3), 0.125);
        let p = FlatHistogramSchedule::pinned(1.0, 0.01);
        assert_eq!(p.gamma(7), 1.0);
        let capped = FlatHistogramSchedule { max_decreases: Some(2), ..s.clone() };
        assert_eq!(capped.gamma(5), 0.25);
    }

    #[test]
    fn advance_resets_counters() {
        let sched = FlatHistogramSchedule::halving(1.0, 0.05);
        let mut st = ScheduleState::new(2, &sched);
        st.record_visit(0);
        st.record_visit(1);
        let before = st.advance(&sched);
        assert_eq!(before, 1.0);
        assert_eq!(st.gamma, 0.5);
        assert_eq!(st.kappa, 1);
        assert_eq!(st.nu.iter().sum::<u64>(), 0);
        assert_eq!(st.t_since_reset, 0);
    }

    #[test]
    fn schedule_validation() {
        let ok = FlatHistogramSchedule::halving(1.0, 0.05);
        assert!(ok.validate().is_ok());
        assert!(FlatHistogramSchedule { decay: 1.0, ..ok.clone() }.validate().is_err());
        assert!(FlatHistogramSchedule { gamma0: 0.0, ..ok.clone() }.validate().is_err());
        assert!(FlatHistogramSchedule { c: 0.0, ..ok.clone() }.validate().is_err());
        assert!(FlatHistogramSchedule { min_samples: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn degenerate_threshold_detection() {
        let phi = DesiredFrequencies::new(vec![0.75, 0.25]).unwrap();
        assert!(FlatHistogramSchedule::halving(1.0, 0.3).is_degenerate(&phi));
        assert!(!FlatHistogramSchedule::halving(1.0, 0.05).is_degenerate(&phi));
    }
}
