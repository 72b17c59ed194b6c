use log::warn;
use rand::Rng;

use crate::error::{Result, WlError};
use crate::kernel::{mh_step, PenaltyState};
use crate::proposal::Proposal;
use crate::target::{ChainState, PartitionedTarget};
use crate::wl::schedule::{fh_met, FlatHistogramSchedule, ScheduleState};
use crate::wl::trace::{FhEvent, RunTrace, TraceRecord};
use crate::wl::update::{DesiredFrequencies, UpdateRule};

/// Output and initialization options shared by both drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    /// Keep one record every `stride` iterations.
    pub stride: u64,
    /// Starting point; the support midpoint when `None`.
    pub x0: Option<f64>,
    /// Recenter `log theta` every this many iterations (0 disables).
    pub recenter_every: u64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { stride: 1, x0: None, recenter_every: 10_000 }
    }
}

impl TraceConfig {
    pub fn with_stride(stride: u64) -> Self {
        Self { stride, ..Self::default() }
    }
}

enum Schedule<'a> {
    Deterministic { alpha: f64 },
    FlatHistogram(&'a FlatHistogramSchedule),
}

/// A Wang-Landau sampler: target, proposal, penalty update and desired
/// frequencies. Penalties start at `theta_0(i) = 1/d`.
#[derive(Debug, Clone)]
pub struct WangLandau<P> {
    target: PartitionedTarget,
    proposal: P,
    rule: UpdateRule,
    phi: DesiredFrequencies,
}

impl<P: Proposal> WangLandau<P> {
    pub fn new(target: PartitionedTarget, proposal: P, rule: UpdateRule, phi: DesiredFrequencies) -> Result<Self> {
        if phi.len() != target.num_bins() {
            return Err(WlError::Config(format!("{} desired frequencies for {} bins", phi.len(), target.num_bins())));
        }
        Ok(Self { target, proposal, rule, phi })
    }

    pub fn target(&self) -> &PartitionedTarget {
        &self.target
    }

    pub fn proposal(&self) -> &P {
        &self.proposal
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule
    }

    pub fn phi(&self) -> &DesiredFrequencies {
        &self.phi
    }

    /// Algorithm with `gamma_t = t^{-alpha}`.
    pub fn run_deterministic<R: Rng>(
        &self,
        alpha: f64,
        iterations: u64,
        rng: &mut R,
        trace: &TraceConfig,
    ) -> Result<RunTrace> {
        crate::wl::schedule::deterministic_gamma(1, alpha)?;
        self.rule.validate(&self.phi, 1.0)?;
        self.run(Schedule::Deterministic { alpha }, iterations, rng, trace)
    }

    /// Algorithm whose `gamma` only decreases when the flat-histogram
    /// criterion is met. The criterion is checked before the penalty update,
    /// so the update of the iteration that triggers it already uses the new
    /// `gamma`.
    pub fn run_flat_histogram<R: Rng>(
        &self,
        schedule: &FlatHistogramSchedule,
        iterations: u64,
        rng: &mut R,
        trace: &TraceConfig,
    ) -> Result<RunTrace> {
        schedule.validate()?;
        self.rule.validate(&self.phi, schedule.gamma0)?;
        if schedule.is_degenerate(&self.phi) {
            warn!(
                "flat-histogram threshold c = {} can be met after a single iteration for phi = {:?}",
                schedule.c,
                self.phi.as_slice()
            );
        }
        self.run(Schedule::FlatHistogram(schedule), iterations, rng, trace)
    }

    fn run<R: Rng>(&self, schedule: Schedule<'_>, iterations: u64, rng: &mut R, cfg: &TraceConfig) -> Result<RunTrace> {
        if iterations == 0 {
            return Err(WlError::Config("number of iterations must be at least 1".into()));
        }
        if cfg.stride == 0 {
            return Err(WlError::Config("trace stride must be at least 1".into()));
        }
        let d = self.target.num_bins();
        let x0 = cfg.x0.unwrap_or_else(|| self.target.midpoint());
        let mut state = ChainState::new(&self.target, x0)?;
        if !state.log_pi_x.is_finite() {
            return Err(WlError::Config(format!("starting point {x0} has zero target density")));
        }
        let phi = self.phi.as_slice();
        let mut penalties = PenaltyState::uniform(d);
        let fh_default = FlatHistogramSchedule::halving(1.0, 1.0);
        let fh = match schedule {
            Schedule::FlatHistogram(s) => s,
            Schedule::Deterministic { .. } => &fh_default,
        };
        let mut sched = ScheduleState::new(d, fh);
        let mut visits = vec![0u64; d];
        let mut records = Vec::with_capacity(iterations.div_ceil(cfg.stride) as usize);
        let mut fh_events = Vec::new();
        let mut accepted = 0u64;
        let mut failure = None;
        let mut completed = 0u64;

        for t in 1..=iterations {
            let next = mh_step(&self.target, &self.proposal, &penalties, &state, rng);
            if next.x != state.x {
                accepted += 1;
            }
            state = next;
            visits[state.bin] += 1;

            let mut fh_event = false;
            let gamma = match schedule {
                Schedule::Deterministic { alpha } => {
                    sched.gamma = (t as f64).powf(-alpha);
                    sched.gamma
                }
                Schedule::FlatHistogram(fh) => {
                    sched.record_visit(state.bin);
                    if sched.t_since_reset >= fh.min_samples && fh_met(&sched, &self.phi) {
                        let gamma_before = sched.advance(fh);
                        fh_events.push(FhEvent { kappa: sched.kappa, t, gamma_before, gamma_after: sched.gamma });
                        fh_event = true;
                    }
                    sched.gamma
                }
            };

            penalties.update(self.rule, state.bin, phi, gamma);
            if !penalties.is_finite() {
                failure = Some(format!("non-finite penalties at iteration {t}: {:?}", penalties.log_theta()));
                break;
            }
            if cfg.recenter_every > 0 && t % cfg.recenter_every == 0 {
                penalties.recenter();
            }
            if (t - 1) % cfg.stride == 0 {
                records.push(TraceRecord {
                    t,
                    bin: state.bin,
                    gamma,
                    kappa: sched.kappa,
                    fh_event,
                    log_theta: penalties.log_theta().to_vec(),
                    visits: visits.clone(),
                });
            }
            completed = t;
        }

        Ok(RunTrace {
            d,
            stride: cfg.stride,
            iterations: completed,
            records,
            fh_events,
            final_log_theta: penalties.log_theta().to_vec(),
            final_visits: visits,
            final_x: state.x,
            final_gamma: sched.gamma,
            final_kappa: sched.kappa,
            accepted,
            failure,
        })
    }
}
