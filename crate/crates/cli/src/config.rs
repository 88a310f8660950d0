//! TOML experiment configuration with per-experiment defaults and
//! field-level validation.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use freelunch_core::domain::DEFAULT_ENUMERATION_CAP;
use freelunch_core::learners::resolve_learner;
use freelunch_core::olea::GAP_EXHAUSTIVE_MAX_N;
use freelunch_core::rational::{parse_rational, Rational};
use freelunch_core::{FiniteDomain, SamplingDistribution};

/// The experiments the runner knows how to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    NflFAverage,
    NflUniformPrior,
    PriorAverage,
    Counterexample,
    PriorWitness,
    HeadToHead,
    OtsVsEmpirical,
    Lln,
    OleaGap,
    OleaEmbedding,
    SumIdentity,
}

impl Experiment {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "nfl-f-average" => Self::NflFAverage,
            "nfl-uniform-prior" => Self::NflUniformPrior,
            "prior-average" => Self::PriorAverage,
            "counterexample" => Self::Counterexample,
            "prior-witness" => Self::PriorWitness,
            "sum-identity" => Self::SumIdentity,
            "head-to-head" => Self::HeadToHead,
            "ots-vs-empirical" => Self::OtsVsEmpirical,
            "lln" => Self::Lln,
            "olea-gap" => Self::OleaGap,
            "olea-embedding" => Self::OleaEmbedding,
            other => bail!(
                "field `experiment`: unknown experiment {other:?} (expected one of: {})",
                ALL_EXPERIMENTS.join(", ")
            ),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::NflFAverage => "nfl-f-average",
            Self::NflUniformPrior => "nfl-uniform-prior",
            Self::PriorAverage => "prior-average",
            Self::Counterexample => "counterexample",
            Self::PriorWitness => "prior-witness",
            Self::HeadToHead => "head-to-head",
            Self::OtsVsEmpirical => "ots-vs-empirical",
            Self::Lln => "lln",
            Self::OleaGap => "olea-gap",
            Self::OleaEmbedding => "olea-embedding",
            Self::SumIdentity => "sum-identity",
        }
    }
}

pub const ALL_EXPERIMENTS: [&str; 11] = [
    "nfl-f-average",
    "nfl-uniform-prior",
    "prior-average",
    "counterexample",
    "prior-witness",
    "head-to-head",
    "ots-vs-empirical",
    "lln",
    "olea-gap",
    "olea-embedding",
    "sum-identity",
];

/// Raw on-disk shape; every field except the experiment name is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    x_size: Option<usize>,
    y_size: Option<usize>,
    m: Option<usize>,
    pi: Option<Vec<String>>,
    loss: Option<String>,
    learners: Option<Vec<String>>,
    horizon: Option<usize>,
    eta: Option<String>,
    seed: Option<u64>,
    n_samples: Option<usize>,
    out_dir: Option<PathBuf>,
    workers: Option<usize>,
    replacement: Option<bool>,
    force: Option<bool>,
}

/// A validated experiment configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub x_size: usize,
    pub y_size: usize,
    pub m: usize,
    pub pi: Option<Vec<Rational>>,
    pub loss: String,
    pub learners: Vec<String>,
    pub horizon: usize,
    pub eta: Rational,
    pub seed: u64,
    pub n_samples: usize,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub replacement: bool,
    pub force: bool,
}

impl ExperimentConfig {
    pub fn domain(&self) -> Result<FiniteDomain> {
        FiniteDomain::new(self.x_size, self.y_size)
            .map_err(|e| anyhow!("field `x_size`/`y_size`: {e}"))
    }

    pub fn sampling(&self) -> Result<SamplingDistribution> {
        match &self.pi {
            None => Ok(SamplingDistribution::uniform(self.x_size)),
            Some(weights) => {
                if weights.len() != self.x_size {
                    bail!(
                        "field `pi`: {} weights for |X| = {}",
                        weights.len(),
                        self.x_size
                    );
                }
                SamplingDistribution::new(weights.clone()).map_err(|e| anyhow!("field `pi`: {e}"))
            }
        }
    }
}

/// Built-in defaults per experiment.
struct Defaults {
    x: usize,
    y: usize,
    m: usize,
    loss: &'static str,
    learners: Vec<&'static str>,
    n_samples: usize,
}

fn defaults(experiment: Experiment) -> Defaults {
    let standard_five = vec![
        "majority",
        "anti-majority",
        "constant:0",
        "constant:1",
        "random",
    ];
    let d = |x, m, learners, n_samples| Defaults {
        x,
        y: 2,
        m,
        loss: "zero-one",
        learners,
        n_samples,
    };
    match experiment {
        Experiment::NflFAverage => d(5, 1, standard_five, 0),
        Experiment::NflUniformPrior => d(4, 1, vec!["majority", "anti-majority", "constant:0"], 0),
        Experiment::PriorAverage => d(4, 1, vec!["majority", "anti-majority"], 1000),
        Experiment::Counterexample => d(5, 3, vec!["cv:max:majority,anti-majority", "random"], 0),
        Experiment::PriorWitness => d(5, 3, vec![], 0),
        // With zero-one loss on binary outputs every pair of learners has an
        // exchangeable joint, so the default showcases the three-output
        // cyclic loss where the joint genuinely distinguishes the order.
        Experiment::HeadToHead => Defaults {
            x: 3,
            y: 3,
            m: 2,
            loss: "cyclic",
            learners: vec!["constant:0", "constant:1", "constant:2"],
            n_samples: 0,
        },
        Experiment::OtsVsEmpirical => d(5, 3, vec!["constant:0"], 0),
        Experiment::Lln => d(1000, 100, vec!["constant:0"], 10_000),
        Experiment::OleaGap => d(5, 3, vec![], 0),
        Experiment::OleaEmbedding => d(5, 3, vec![], 1000),
        Experiment::SumIdentity => d(5, 3, vec![], 0),
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).context("parsing TOML config")?;
    let experiment = Experiment::parse(&raw.experiment)?;
    let def = defaults(experiment);

    let pi = raw
        .pi
        .map(|strs| {
            strs.iter()
                .map(|s| parse_rational(s).map_err(|e| anyhow!("field `pi`: {e}")))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let eta = raw
        .eta
        .as_deref()
        .map(|s| parse_rational(s).map_err(|e| anyhow!("field `eta`: {e}")))
        .transpose()?
        .unwrap_or_else(|| Rational::new(1.into(), 1.into()));

    let config = ExperimentConfig {
        experiment,
        x_size: raw.x_size.unwrap_or(def.x),
        y_size: raw.y_size.unwrap_or(def.y),
        m: raw.m.unwrap_or(def.m),
        pi,
        loss: raw.loss.unwrap_or_else(|| def.loss.into()),
        learners: raw
            .learners
            .unwrap_or_else(|| def.learners.iter().map(|s| s.to_string()).collect()),
        horizon: raw.horizon.unwrap_or(10),
        eta,
        seed: raw.seed.unwrap_or(0),
        n_samples: raw.n_samples.unwrap_or(def.n_samples),
        out_dir: raw.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        workers: raw.workers.unwrap_or(0),
        // The counterexample construction needs distinct training points:
        // with replacement, repeated-input datasets let the two
        // leave-one-out rankings tie and dilute the exact cost of one.
        replacement: raw
            .replacement
            .unwrap_or(experiment != Experiment::Counterexample),
        force: raw.force.unwrap_or(false),
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ExperimentConfig) -> Result<()> {
    let domain = config.domain()?;
    config.sampling()?;

    if config.loss != "zero-one" && config.loss != "cyclic" && !config.loss.starts_with("file:") {
        bail!(
            "field `loss`: unknown loss {:?} (expected \"zero-one\", \"cyclic\", or \"file:<path>\")",
            config.loss
        );
    }

    for name in &config.learners {
        resolve_learner(name, domain).map_err(|e| anyhow!("field `learners`: {e}"))?;
    }

    match config.experiment {
        Experiment::Counterexample | Experiment::PriorWitness | Experiment::SumIdentity => {
            if config.m.is_multiple_of(2) {
                bail!(
                    "field `m`: experiment {:?} requires an odd training-set size, got {}",
                    config.experiment.name(),
                    config.m
                );
            }
        }
        Experiment::Lln => {
            if config.x_size < 10 * config.m {
                bail!(
                    "field `x_size`: lln requires |X| >= 10 m (got |X| = {}, m = {})",
                    config.x_size,
                    config.m
                );
            }
        }
        Experiment::OleaGap if (config.horizon == 0 || config.horizon > GAP_EXHAUSTIVE_MAX_N) => {
            bail!(
                "field `horizon`: olea-gap needs 1 <= horizon <= {GAP_EXHAUSTIVE_MAX_N}, got {}",
                config.horizon
            );
        }
        _ => {}
    }

    // Function-enumeration budget applies to every supervised experiment.
    if config.experiment != Experiment::OleaGap && config.experiment != Experiment::Lln {
        match domain.function_count() {
            Some(count) if count <= DEFAULT_ENUMERATION_CAP => {}
            _ => bail!(
                "field `x_size`/`y_size`: {}^{} functions exceed the enumeration cap {}",
                config.y_size,
                config.x_size,
                DEFAULT_ENUMERATION_CAP
            ),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_counterexample_gets_defaults() {
        let config = parse_config_str("experiment = \"counterexample\"").unwrap();
        assert_eq!(config.experiment, Experiment::Counterexample);
        assert_eq!(config.x_size, 5);
        assert_eq!(config.m, 3);
        assert_eq!(config.seed, 0);
        assert!(!config.replacement, "counterexample needs distinct points");
        assert!(config.pi.is_none());
        assert!(
            parse_config_str("experiment = \"nfl-f-average\"")
                .unwrap()
                .replacement
        );
        assert_eq!(config.loss, "zero-one");
    }

    #[test]
    fn misspelled_learner_is_a_field_error() {
        let err = parse_config_str("experiment = \"nfl-f-average\"\nlearners = [\"majorty\"]\n")
            .unwrap_err();
        let message = format!("{err}");
        assert!(message.contains("`learners`"), "{message}");
        assert!(message.contains("majorty"), "{message}");
    }

    #[test]
    fn even_m_rejected_for_counterexample() {
        let err = parse_config_str("experiment = \"counterexample\"\nm = 4\n").unwrap_err();
        assert!(format!("{err}").contains("odd"));
    }

    #[test]
    fn unknown_experiment_rejected() {
        let err = parse_config_str("experiment = \"nfl\"").unwrap_err();
        assert!(format!("{err}").contains("unknown experiment"));
    }

    #[test]
    fn budget_violation_rejected() {
        let err = parse_config_str("experiment = \"nfl-f-average\"\nx_size = 30\n").unwrap_err();
        assert!(format!("{err}").contains("enumeration cap"));
    }

    #[test]
    fn explicit_pi_must_match_domain() {
        let config = parse_config_str(
            "experiment = \"nfl-f-average\"\nx_size = 2\npi = [\"1/2\", \"1/2\"]\n",
        )
        .unwrap();
        assert!(config.sampling().is_ok());
        let err = parse_config_str(
            "experiment = \"nfl-f-average\"\nx_size = 3\npi = [\"1/2\", \"1/2\"]\n",
        )
        .unwrap_err();
        assert!(format!("{err}").contains("pi"));
    }
}
