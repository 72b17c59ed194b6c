use clap::Args;
use wanglandau::analysis::predict_limit;
use wanglandau::{DesiredFrequencies, UpdateRule};

#[derive(Args, Debug)]
pub struct LimitArgs {
    /// linear or logform
    #[arg(long)]
    pub rule: UpdateRule,
    /// Desired frequencies, comma separated (two bins).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub phi: Vec<f64>,
    #[arg(long)]
    pub gamma: f64,
}

pub fn limit(args: &LimitArgs) -> anyhow::Result<()> {
    let phi = DesiredFrequencies::new(args.phi.clone())?;
    let l = predict_limit(args.rule, &phi, args.gamma)?;
    let parts: Vec<String> = l.as_slice().iter().map(|v| format!("{v:.6}")).collect();
    println!("{}", parts.join(" "));
    Ok(())
}
