use std::io::Write;

use anyhow::{bail, Context};
use clap::{Subcommand, ValueEnum};
use rand::SeedableRng;
use wanglandau::seeds::replica_rng;
use wanglandau::theorylab::{
    expected_hitting_time, find_threshold, irreducibility_smoke_test, lattice_path, monte_carlo_hitting_time,
    run_coupling, simulate_bounding_chain, zero_return_path, BoundingSummary, ConditionalLaw, Increment, LatticePoint,
    RationalFrequencies, TwoStateChain,
};
use wanglandau::{GaussianRandomWalk, PartitionedTarget};

use crate::config::ExperimentConfig;
use crate::output::{create, out_dir};
use crate::GlobalArgs;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StartState {
    Up,
    Down,
}

impl From<StartState> for Increment {
    fn from(s: StartState) -> Self {
        match s {
            StartState::Up => Increment::Up,
            StartState::Down => Increment::Down,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum TheoryCommand {
    /// Expected hitting time of the bounding chain: first-step analysis vs Monte Carlo.
    Hitting {
        /// One or more switch probabilities +a -> -b.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
        /// One or more switch probabilities -b -> +a.
        #[arg(long, value_delimiter = ',', required = true)]
        eta: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Monte Carlo replicas per row (0 skips the simulation).
        #[arg(long = "mc", default_value_t = 100_000)]
        mc_replicas: u64,
        #[arg(long, value_enum, default_value_t = StartState::Up)]
        start: StartState,
    },
    /// Zero-return vector and, given endpoints, a path between lattice points.
    Lattice {
        /// Rational frequencies, e.g. 3/4,1/4.
        #[arg(long)]
        phi: RationalFrequencies,
        /// Counts defining the starting point, e.g. 1,0.
        #[arg(long, value_delimiter = ',')]
        from: Option<Vec<u64>>,
        /// Counts defining the end point (default: origin).
        #[arg(long, value_delimiter = ',')]
        to: Option<Vec<u64>>,
    },
    /// Coupled true/bounding increments; counts domination violations.
    Coupling {
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        /// P[U' = -b | U = +a] of the true process.
        #[arg(long, default_value_t = 0.4)]
        p_down_up: f64,
        /// P[U' = -b | U = -b] of the true process.
        #[arg(long, default_value_t = 0.95)]
        p_down_down: f64,
        /// Estimate the true law from the sampler of --config (default: the
        /// two-bin truncated normal) at the smallest Z on a grid meeting the bounds.
        #[arg(long)]
        live: bool,
        /// Largest Z scanned in --live mode (step 0.25).
        #[arg(long, default_value_t = 10.0)]
        z_max: f64,
    },
    /// Empirical check that small visit-count vectors are realized by the sampler.
    Irreducibility {
        #[arg(long)]
        phi: RationalFrequencies,
        /// Count vectors separated by ';', e.g. "2,1;3,0".
        #[arg(long, default_value = "2,1")]
        counts: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
    },
    /// Simulate the two-state bounding chain.
    Bounding {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = StartState::Up)]
        start: StartState,
        /// Also write the path to bounding_path.csv in the output directory.
        #[arg(long)]
        write_path: bool,
    },
}

pub fn theory(global: &GlobalArgs, command: TheoryCommand) -> anyhow::Result<()> {
    let seed = global.seed.unwrap_or(1);
    match command {
        TheoryCommand::Hitting { epsilon, eta, a, b, mc_replicas, start } => {
            let mut rows = vec!["epsilon,eta,a,b,analytic,mc_mean,mc_se".to_string()];
            for (k, (&e, &h)) in epsilon.iter().flat_map(|e| eta.iter().map(move |h| (e, h))).enumerate() {
                let chain = TwoStateChain::new(e, h, a, b)?;
                let analytic = match expected_hitting_time(&chain, start.into()) {
                    Ok(v) => v,
                    Err(err) => {
                        eprintln!("skipping epsilon={e} eta={h}: {err}");
                        continue;
                    }
                };
                let (mean, se) = if mc_replicas >= 2 {
                    let est = monte_carlo_hitting_time(&chain, start.into(), mc_replicas, seed.wrapping_add(k as u64))?;
                    (format!("{}", est.mean), format!("{}", est.se))
                } else {
                    (String::new(), String::new())
                };
                rows.push(format!("{e},{h},{a},{b},{analytic},{mean},{se}"));
            }
            emit(global, "hitting.csv", &rows)
        }
        TheoryCommand::Lattice { phi, from, to } => {
            let n = zero_return_path(&phi);
            println!("n = {n}");
            if from.is_some() || to.is_some() {
                let d = phi.len();
                let from = LatticePoint::new(from.unwrap_or_else(|| vec![0; d]));
                let to = LatticePoint::new(to.unwrap_or_else(|| vec![0; d]));
                let k = lattice_path(&phi, &from, &to)?;
                println!("k = {}", LatticePoint::new(k));
                println!("verified = true");
            }
            Ok(())
        }
        TheoryCommand::Coupling { steps, epsilon, eta, p_down_up, p_down_down, live, z_max } => {
            let chain = TwoStateChain::new(epsilon, eta, 1.0, 1.0)?;
            let mut rng = replica_rng(seed, 0);
            let law = if live {
                let (target, proposal) = live_sampler(global)?;
                let grid: Vec<f64> = (0..=(z_max * 4.0) as usize).map(|i| i as f64 * 0.25).collect();
                let x0 = target.midpoint();
                match find_threshold(&target, &proposal, &chain, &grid, x0, 200_000, &mut rng)? {
                    Some((z, law)) => {
                        eprintln!("empirical threshold Z = {z}");
                        law
                    }
                    None => bail!("no Z up to {z_max} meets the bounds for epsilon={epsilon}, eta={eta}"),
                }
            } else {
                ConditionalLaw::new(p_down_up, p_down_down)?
            };
            let r = run_coupling(&law, &chain, steps, &mut rng)?;
            let m = r.empirical_matrix();
            let p = r.probabilities;
            let rows = vec![
                "steps,violations,p_down_up,p_down_down,p1,p2,p3,ut_up_up,ut_up_down,ut_down_up,ut_down_down,max_z"
                    .into(),
                format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
                    r.steps,
                    r.violations,
                    law.p_down_after_up,
                    law.p_down_after_down,
                    p.p1,
                    p.p2,
                    p.p3,
                    m[0][0],
                    m[0][1],
                    m[1][0],
                    m[1][1],
                    r.max_z_score(&chain)
                ),
            ];
            emit(global, "coupling.csv", &rows)
        }
        TheoryCommand::Irreducibility { phi, counts, trials, gamma, x0 } => {
            let (target, proposal) = live_sampler(global)?;
            let points = counts
                .split(';')
                .map(|v| {
                    v.split(',')
                        .map(|c| c.trim().parse::<u64>().with_context(|| format!("bad count in {v:?}")))
                        .collect::<anyhow::Result<Vec<_>>>()
                        .map(LatticePoint::new)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let report = irreducibility_smoke_test(&target, &proposal, &phi, gamma, x0, &points, trials, seed)?;
            let mut rows = vec!["counts,trials,realized,fraction".to_string()];
            for p in &report.paths {
                let c: Vec<String> = p.counts.iter().map(u64::to_string).collect();
                rows.push(format!("\"{}\",{},{},{}", c.join(","), p.trials, p.realized, p.fraction()));
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(global, "irreducibility.csv", &rows)
        }
        TheoryCommand::Bounding { epsilon, eta, a, b, steps, start, write_path } => {
            if steps == 0 {
                bail!("--steps must be at least 1");
            }
            let chain = TwoStateChain::new(epsilon, eta, a, b)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let path = simulate_bounding_chain(&chain, start.into(), steps, &mut rng);
            let s = BoundingSummary::from_path(&chain, &path);
            let (stat_up, drift) = match (chain.stationary(), chain.stationary_drift()) {
                (Ok(pi), Ok(d)) => (pi[0].to_string(), d.to_string()),
                _ => (String::new(), String::new()),
            };
            let rows = vec![
                "steps,up_fraction,down_fraction,mean_increment,stationary_up,stationary_drift".into(),
                format!("{},{},{},{},{stat_up},{drift}", s.steps, s.up_fraction, s.down_fraction, s.mean_increment),
            ];
            if write_path {
                let mut w = create(&out_dir(global)?.join("bounding_path.csv"))?;
                writeln!(w, "t,state,partial_sum")?;
                let mut sum = 0.0;
                for (t, st) in path.iter().enumerate() {
                    sum += chain.value(*st);
                    writeln!(w, "{},{st},{sum}", t + 1)?;
                }
                w.flush()?;
            }
            emit(global, "bounding.csv", &rows)
        }
    }
}

/// Prints CSV rows and, when an output directory was requested, writes them.
fn emit(global: &GlobalArgs, name: &str, rows: &[String]) -> anyhow::Result<()> {
    for r in rows {
        println!("{r}");
    }
    if global.out.is_some() || std::env::var_os(crate::output::OUT_DIR_ENV).is_some() {
        let mut w = create(&out_dir(global)?.join(name))?;
        for r in rows {
            writeln!(w, "{r}")?;
        }
        w.flush()?;
    }
    Ok(())
}

fn live_sampler(global: &GlobalArgs) -> anyhow::Result<(PartitionedTarget, Box<dyn wanglandau::Proposal>)> {
    match &global.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            Ok((cfg.target()?, cfg.proposal()?))
        }
        None => Ok((
            PartitionedTarget::truncated_normal(0.0, 1.0, vec![-10.0, 0.0, 10.0])?,
            Box::new(GaussianRandomWalk::new(1.0)?),
        )),
    }
}
