use std::io::Write;

use anyhow::Context;
use log::info;
use wanglandau::analysis::{fh_hitting_stats, frequency_trace, last_half_frequencies, svg::frequency_plot};
use wanglandau::seeds::run_replicas;
use wanglandau::{RunTrace, TraceConfig};

use crate::config::{ExperimentConfig, ScheduleConfig};
use crate::output::{create, out_dir};
use crate::GlobalArgs;

pub fn run(global: &GlobalArgs) -> anyhow::Result<()> {
    let path = global.config.as_deref().context("run needs --config")?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = global.seed {
        cfg.output.seed = s;
    }
    if let Some(r) = global.replicas {
        cfg.output.replicas = r;
    }
    if let Some(s) = global.stride {
        cfg.output.stride = s;
    }
    cfg.validate()?;
    let dir = out_dir(global)?;
    std::fs::write(dir.join("config.toml"), cfg.to_toml()?)?;
    let wl = cfg.sampler()?;
    let trace_cfg = TraceConfig { x0: cfg.sampler.x0, ..TraceConfig::with_stride(cfg.output.stride) };
    let iterations = cfg.sampler.iterations;
    info!("running {} replicas of {} iterations", cfg.output.replicas, iterations);

    let traces: Vec<RunTrace> = run_replicas(cfg.output.seed, cfg.output.replicas, |_, rng| match &cfg.schedule {
        ScheduleConfig::Deterministic { alpha } => wl.run_deterministic(*alpha, iterations, rng, &trace_cfg),
        ScheduleConfig::FlatHistogram { .. } => {
            let s = cfg.flat_histogram().expect("flat-histogram schedule");
            wl.run_flat_histogram(&s, iterations, rng, &trace_cfg)
        }
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let is_fh = matches!(cfg.schedule, ScheduleConfig::FlatHistogram { .. });
    let phi = cfg.sampler.phi.clone();
    let d = phi.len();
    let title = format!("{} update, {}", cfg.rule()?, wl.target().label());
    for (k, trace) in traces.iter().enumerate() {
        trace.write_trace_csv(create(&dir.join(format!("trace_r{k}.csv")))?)?;
        if is_fh {
            trace.write_fh_log_csv(create(&dir.join(format!("fh_r{k}.csv")))?)?;
        }
        let svg = frequency_plot(&frequency_trace(trace)?, &phi, &format!("{title}, replica {k}"));
        std::fs::write(dir.join(format!("freq_r{k}.svg")), svg)?;
        if let Some(f) = &trace.failure {
            eprintln!("warning: replica {k} stopped early: {f}");
        }
    }

    let mut summary = create(&dir.join("summary.csv"))?;
    let freq_cols: Vec<String> = (1..=d).map(|i| format!("freq_{i}")).collect();
    let half_cols: Vec<String> = (1..=d).map(|i| format!("last_half_{i}")).collect();
    writeln!(
        summary,
        "replica,iterations,kappa,final_gamma,acceptance,{},{},max_abs_z_over_t",
        freq_cols.join(","),
        half_cols.join(",")
    )?;
    for (k, trace) in traces.iter().enumerate() {
        let fmt = |v: Vec<f64>| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(",");
        let t = trace.iterations as f64;
        let z_max = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| (trace.final_z(i, j) / t).abs())
            .fold(0.0, f64::max);
        writeln!(
            summary,
            "{k},{},{},{:e},{:.6},{},{},{z_max:e}",
            trace.iterations,
            trace.final_kappa,
            trace.final_gamma,
            trace.accepted as f64 / t,
            fmt(trace.final_frequencies()),
            fmt(last_half_frequencies(trace)),
        )?;
        println!(
            "replica {k}: freqs {} last-half {} kappa {}",
            fmt(trace.final_frequencies()),
            fmt(last_half_frequencies(trace)),
            trace.final_kappa
        );
    }
    summary.flush()?;

    if is_fh {
        let stats = fh_hitting_stats(&traces)?;
        stats.write_csv(create(&dir.join("fh_stats.csv"))?)?;
        if !stats.zero_fh_replicas.is_empty() {
            println!("replicas without flat-histogram events: {:?}", stats.zero_fh_replicas);
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}
