use anyhow::Context;
use clap::Args;
use wanglandau::diagnostics::check_assumptions;

use crate::config::ExperimentConfig;
use crate::GlobalArgs;

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = 401)]
    pub grid: usize,
}

pub fn diagnose(global: &GlobalArgs, args: &DiagnoseArgs) -> anyhow::Result<()> {
    let path = global.config.as_deref().context("diagnose needs --config")?;
    let cfg = ExperimentConfig::load(path)?;
    let report = check_assumptions(&cfg.target()?, &cfg.proposal()?, args.grid)?;
    println!("bin,width,pi_mass_fraction,nonempty");
    for b in &report.bins {
        println!("{},{},{:.6e},{}", b.bin + 1, b.width, b.pi_mass_fraction, b.lebesgue_positive && b.pi_mass_positive);
    }
    println!("compact = {}", report.compact);
    println!("q_min = {:.6e}", report.q_min);
    println!("ratio_min = {:.6e}", report.ratio_min);
    println!("ratio_max = {:.6e}", report.ratio_max);
    println!("all assumptions hold = {}", report.all_hold());
    for w in report.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(())
}
