use rand::Rng;

use super::banded::BandMatrix;
use super::bounding::{Increment, TwoStateChain};
use crate::error::{Result, WlError};
use crate::seeds::run_replicas;

const MAX_DENOMINATOR: u64 = 1000;
const CONVERGENCE_TOL: f64 = 1e-11;
const MAX_LEVELS: usize = 1 << 22;

/// Integers `(p, q)` with `a / b = p / q`, found by continued fractions.
pub fn commensurate_levels(a: f64, b: f64) -> Result<(u64, u64)> {
    let x = a / b;
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let ai = r.floor();
        let ai_u = ai as u64;
        let h2 = ai_u.checked_mul(h1).and_then(|v| v.checked_add(h0));
        let k2 = ai_u.checked_mul(k1).and_then(|v| v.checked_add(k0));
        let (Some(h2), Some(k2)) = (h2, k2) else { break };
        if k2 > MAX_DENOMINATOR || h2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if h1 > 0 && ((h1 as f64 / k1 as f64) - x).abs() <= 1e-12 * x {
            return Ok((h1, k1));
        }
        let frac = r - ai;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    Err(WlError::Unsupported(format!("a/b = {x} is not a ratio of integers up to {MAX_DENOMINATOR}")))
}

/// Expected number of steps before the partial sums of the chain started
/// (as previous state) at `start` first reach `<= -a`.
pub fn expected_hitting_time(chain: &TwoStateChain, start: Increment) -> Result<f64> {
    if !chain.has_negative_drift() {
        return Err(WlError::Drift { up: chain.a * chain.eta, down: chain.b * chain.epsilon });
    }
    let (p, q) = commensurate_levels(chain.a, chain.b)?;
    let (p, q) = (p as usize, q as usize);
    let mut cap = 64 * (p + q);
    let mut prev = solve_truncated(chain, start, p, q, cap)?;
    loop {
        cap *= 2;
        if cap > MAX_LEVELS {
            return Err(WlError::Diagnostic(format!(
                "hitting time did not converge with {MAX_LEVELS} levels (last value {prev})"
            )));
        }
        let next = solve_truncated(chain, start, p, q, cap)?;
        if (next - prev).abs() <= CONVERGENCE_TOL * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
}

// Levels l in (-p, cap], two chain states per level; paths above cap are killed.
fn solve_truncated(chain: &TwoStateChain, start: Increment, p: usize, q: usize, cap: usize) -> Result<f64> {
    let levels = cap + p;
    let n = 2 * levels;
    let idx = |level: i64, s: usize| 2 * (level + p as i64 - 1) as usize + s;
    let mut m = BandMatrix::new(n, 2 * q, 2 * p);
    let tm = chain.transition_matrix();
    for level in -(p as i64) + 1..=cap as i64 {
        for s in 0..2 {
            let r = idx(level, s);
            m.add(r, r, 1.0);
            let up = level + p as i64;
            if up <= cap as i64 && tm[s][0] > 0.0 {
                m.add(r, idx(up, 0), -tm[s][0]);
            }
            let down = level - q as i64;
            if down > -(p as i64) && tm[s][1] > 0.0 {
                m.add(r, idx(down, 1), -tm[s][1]);
            }
        }
    }
    let h = m.solve(vec![1.0; n]).ok_or_else(|| WlError::Diagnostic("singular hitting-time system".into()))?;
    Ok(h[idx(0, start.index())])
}

/// One draw of the hitting time.
pub fn sample_hitting_time<R: Rng + ?Sized>(chain: &TwoStateChain, start: Increment, rng: &mut R) -> u64 {
    let threshold = -chain.a + 1e-9 * chain.a.max(chain.b);
    let mut s = start;
    let mut sum = 0.0;
    let mut steps = 0u64;
    loop {
        s = chain.step(s, rng);
        sum += chain.value(s);
        steps += 1;
        if sum <= threshold {
            return steps;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingEstimate {
    pub mean: f64,
    pub se: f64,
    pub replicas: u64,
}

const MC_CHUNKS: usize = 64;

/// Sample mean and standard error over `replicas` independent draws.
/// Deterministic in `seed` regardless of thread count.
pub fn monte_carlo_hitting_time(
    chain: &TwoStateChain,
    start: Increment,
    replicas: u64,
    seed: u64,
) -> Result<HittingEstimate> {
    if !chain.has_negative_drift() {
        return Err(WlError::Drift { up: chain.a * chain.eta, down: chain.b * chain.epsilon });
    }
    if replicas < 2 {
        return Err(WlError::Config("need at least two replicas".into()));
    }
    let chunks = run_replicas(seed, MC_CHUNKS, |k, rng| {
        let k = k as u64;
        let n = replicas / MC_CHUNKS as u64 + u64::from(k < replicas % MC_CHUNKS as u64);
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let t = sample_hitting_time(chain, start, rng) as f64;
            s1 += t;
            s2 += t * t;
        }
        (s1, s2)
    });
    let (s1, s2) = chunks.iter().fold((0.0, 0.0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let n = replicas as f64;
    let mean = s1 / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(HittingEstimate { mean, se: (var / n).sqrt(), replicas })
}
