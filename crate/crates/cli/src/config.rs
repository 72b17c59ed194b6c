//! TOML experiment description.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use wanglandau::{
    DesiredFrequencies, FlatHistogramSchedule, GaussianRandomWalk, IndependentUniform, PartitionedTarget, Proposal,
    UpdateRule, WangLandau,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: TargetConfig,
    pub proposal: ProposalConfig,
    pub sampler: SamplerConfig,
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetConfig {
    TruncatedNormal { mean: f64, sd: f64, edges: Vec<f64> },
    Uniform { edges: Vec<f64> },
    Bimodal { mean_a: f64, mean_b: f64, sd: f64, edges: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProposalConfig {
    Gaussian { scale: f64 },
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    /// "linear" or "logform".
    pub rule: String,
    pub phi: Vec<f64>,
    pub iterations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Deterministic {
        alpha: f64,
    },
    FlatHistogram {
        gamma0: f64,
        c: f64,
        #[serde(default = "half")]
        decay: f64,
        #[serde(default = "one")]
        c_decay: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_decreases: Option<u32>,
        #[serde(default = "one_sample")]
        min_samples: u64,
    },
}

fn half() -> f64 {
    0.5
}

fn one() -> f64 {
    1.0
}

fn one_sample() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub replicas: usize,
    pub seed: u64,
    pub stride: u64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { replicas: 1, seed: 1, stride: 100 }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    /// Checks everything that can fail before a run starts.
    pub fn validate(&self) -> anyhow::Result<()> {
        let wl = self.sampler()?;
        match &self.schedule {
            ScheduleConfig::Deterministic { alpha } => {
                wanglandau::wl::deterministic_gamma(1, *alpha)?;
                wl.rule().validate(wl.phi(), 1.0)?;
            }
            ScheduleConfig::FlatHistogram { .. } => {
                let s = self.flat_histogram().expect("flat-histogram schedule");
                s.validate()?;
                wl.rule().validate(wl.phi(), s.gamma0)?;
            }
        }
        if self.sampler.iterations == 0 {
            bail!("sampler.iterations must be at least 1");
        }
        if self.output.replicas == 0 || self.output.stride == 0 {
            bail!("output.replicas and output.stride must be at least 1");
        }
        Ok(())
    }

    pub fn target(&self) -> anyhow::Result<PartitionedTarget> {
        Ok(match &self.target {
            TargetConfig::TruncatedNormal { mean, sd, edges } => {
                PartitionedTarget::truncated_normal(*mean, *sd, edges.clone())?
            }
            TargetConfig::Uniform { edges } => PartitionedTarget::uniform(edges.clone())?,
            TargetConfig::Bimodal { mean_a, mean_b, sd, edges } => {
                PartitionedTarget::bimodal(*mean_a, *mean_b, *sd, edges.clone())?
            }
        })
    }

    pub fn proposal(&self) -> anyhow::Result<Box<dyn Proposal>> {
        Ok(match &self.proposal {
            ProposalConfig::Gaussian { scale } => Box::new(GaussianRandomWalk::new(*scale)?),
            ProposalConfig::Uniform { lo, hi } => Box::new(IndependentUniform::new(*lo, *hi)?),
        })
    }

    pub fn rule(&self) -> anyhow::Result<UpdateRule> {
        Ok(self.sampler.rule.parse()?)
    }

    pub fn sampler(&self) -> anyhow::Result<WangLandau<Box<dyn Proposal>>> {
        let phi = DesiredFrequencies::new(self.sampler.phi.clone())?;
        Ok(WangLandau::new(self.target()?, self.proposal()?, self.rule()?, phi)?)
    }

    pub fn flat_histogram(&self) -> Option<FlatHistogramSchedule> {
        match &self.schedule {
            ScheduleConfig::FlatHistogram { gamma0, c, decay, c_decay, max_decreases, min_samples } => {
                Some(FlatHistogramSchedule {
                    gamma0: *gamma0,
                    decay: *decay,
                    c: *c,
                    c_decay: *c_decay,
                    max_decreases: *max_decreases,
                    min_samples: *min_samples,
                })
            }
            ScheduleConfig::Deterministic { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"
[target]
kind = "truncated_normal"
mean = 0.0
sd = 1.0
edges = [-10.0, 0.0, 10.0]

[proposal]
kind = "gaussian"
scale = 1.0

[sampler]
rule = "linear"
phi = [0.75, 0.25]
iterations = 1000
x0 = 0.0

[schedule]
kind = "flat_histogram"
gamma0 = 1.0
c = 0.01
min_samples = 5000
"#;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::parse(TOY).unwrap();
        assert_eq!(cfg.output, OutputConfig::default());
        let again = ExperimentConfig::parse(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        let fh = cfg.flat_histogram().unwrap();
        assert_eq!((fh.decay, fh.c_decay, fh.min_samples), (0.5, 1.0, 5000));
    }

    #[test]
    fn rejects_bad_alpha_and_unknown_keys() {
        let bad = TOY.replace(
            "kind = \"flat_histogram\"\ngamma0 = 1.0\nc = 0.01\nmin_samples = 5000",
            "kind = \"deterministic\"\nalpha = 0.4",
        );
        let err = ExperimentConfig::parse(&bad).unwrap_err();
        assert!(format!("{err:#}").contains("alpha"), "{err:#}");
        assert!(ExperimentConfig::parse(&TOY.replace("sd = 1.0", "sd = 1.0\nwidth = 2")).is_err());
    }

    #[test]
    fn rejects_logform_with_large_gamma() {
        let bad = TOY.replace("rule = \"linear\"", "rule = \"logform\"").replace("gamma0 = 1.0", "gamma0 = 2.0");
        assert!(ExperimentConfig::parse(&bad).is_err());
    }
}
