//! The fixed acceptance checklist behind `verify-all`: ten numbered criteria,
//! each executed through the same runner paths as `run`.

use anyhow::{bail, Result};
use itertools::Itertools;

use crate::config::{parse_config_str, ExperimentConfig};
use crate::runner::{run_experiment, ReportBundle, Verdict};

/// `default` runs every criterion at its stated scale; `small` shrinks the
/// heavy ones for quick smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Default,
    Small,
}

impl Profile {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self::Default),
            "small" => Ok(Self::Small),
            other => bail!("unknown profile {other:?} (expected \"default\" or \"small\")"),
        }
    }

    fn small(self) -> bool {
        self == Self::Small
    }
}

pub const CRITERIA_COUNT: usize = 10;

/// Runs all criteria in order.
pub fn verify_all(profile: Profile) -> Vec<Verdict> {
    (1..=CRITERIA_COUNT)
        .map(|i| criterion(i, profile))
        .collect()
}

/// Runs one criterion (1-based); internal errors become FAIL verdicts.
pub fn criterion(index: usize, profile: Profile) -> Verdict {
    let result = match index {
        1 => c01_f_average(profile),
        2 => c02_uniform_prior(profile),
        3 => c03_counterexample(profile),
        4 => c04_sum_identity(profile),
        5 => c05_prior_witness(profile),
        6 => c06_ots_vs_empirical(profile),
        7 => c07_lln(profile),
        8 => c08_gap_exhaustive(profile),
        9 => c09_embedding(profile),
        10 => c10_head_to_head(profile),
        other => Err(anyhow::anyhow!("no criterion {other}")),
    };
    match result {
        Ok(verdict) => verdict,
        Err(e) => Verdict::new(
            &format!("criterion-{index:02}"),
            String::new(),
            false,
            format!("error={e:#}").replace(['\n', ','], ";"),
        ),
    }
}

fn base_config(experiment: &str) -> Result<ExperimentConfig> {
    parse_config_str(&format!("experiment = \"{experiment}\""))
}

fn summarize(check: &str, params: String, bundle: &ReportBundle) -> Verdict {
    let detail = bundle
        .verdicts
        .iter()
        .map(|v| {
            format!(
                "{}={};{}",
                v.check,
                if v.pass { "PASS" } else { "FAIL" },
                v.detail
            )
        })
        .join(";");
    Verdict::new(check, params, bundle.all_pass(), detail)
}

fn c01_f_average(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("nfl-f-average")?;
    config.x_size = if profile.small() { 4 } else { 5 };
    let mut pass = true;
    let mut details = Vec::new();
    for m in [1, 3] {
        config.m = m;
        let bundle = run_experiment(&config)?;
        pass &= bundle.all_pass();
        details.push(format!(
            "m{m}={};{}",
            if bundle.all_pass() { "PASS" } else { "FAIL" },
            bundle.verdicts[0].detail
        ));
    }
    Ok(Verdict::new(
        "criterion-01-f-average",
        format!("x={};y=2;m=1|3;learners=5", config.x_size),
        pass,
        details.join(";"),
    ))
}

fn c02_uniform_prior(_profile: Profile) -> Result<Verdict> {
    let mut config = base_config("nfl-uniform-prior")?;
    config.m = 3; // the runner covers dataset sizes 1 and m
    config.learners = [
        "majority",
        "anti-majority",
        "constant:0",
        "constant:1",
        "random",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-02-uniform-prior",
        "x=4;y=2;sizes=1|3;learners=5".into(),
        &bundle,
    ))
}

fn c03_counterexample(_profile: Profile) -> Result<Verdict> {
    let config = base_config("counterexample")?;
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-03-counterexample",
        "x=5;y=2;m=3;prior=two-constants".into(),
        &bundle,
    ))
}

fn c04_sum_identity(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("sum-identity")?;
    if profile.small() {
        config.x_size = 4;
    }
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-04-sum-identity",
        format!("x={};y=2;m=3", config.x_size),
        &bundle,
    ))
}

fn c05_prior_witness(_profile: Profile) -> Result<Verdict> {
    let config = base_config("prior-witness")?;
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-05-prior-witness",
        "x=5;y=2;m=3".into(),
        &bundle,
    ))
}

fn c06_ots_vs_empirical(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("ots-vs-empirical")?;
    if profile.small() {
        config.x_size = 4;
    }
    let bundle = run_experiment(&config)?;
    // The generic run checks that all rows agree; here the common value must
    // also be exactly one half.
    let mut verdict = summarize(
        "criterion-06-ots-vs-empirical",
        format!("x={};y=2;m=3", config.x_size),
        &bundle,
    );
    verdict.pass &= verdict.detail.contains("common_expected_ots_cost=1/2");
    Ok(verdict)
}

fn c07_lln(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("lln")?;
    config.seed = 101;
    if profile.small() {
        config.x_size = 100;
        config.m = 10;
        config.n_samples = 2000;
    }
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-07-lln",
        format!(
            "x={};m={};n_samples={};seeds=101..103",
            config.x_size, config.m, config.n_samples
        ),
        &bundle,
    ))
}

fn c08_gap_exhaustive(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("olea-gap")?;
    config.horizon = if profile.small() { 8 } else { 10 };
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-08-gap-exhaustive",
        format!("n={}", config.horizon),
        &bundle,
    ))
}

fn c09_embedding(profile: Profile) -> Result<Verdict> {
    let mut config = base_config("olea-embedding")?;
    if profile.small() {
        config.n_samples = 200;
    }
    let bundle = run_experiment(&config)?;
    Ok(summarize(
        "criterion-09-embedding",
        format!("m=3;window=4;n_samples={}", config.n_samples),
        &bundle,
    ))
}

fn c10_head_to_head(_profile: Profile) -> Result<Verdict> {
    // Stage A: zero-one loss, binary outputs, the four-learner registry set.
    // Marginals must equal the common distribution; the joints are all
    // exchangeable here (relabeling f off the training inputs swaps any two
    // deterministic learners' costs without touching the dataset), and the
    // exhaustive search is required to confirm exactly that.
    let mut binary = base_config("head-to-head")?;
    binary.x_size = 4;
    binary.y_size = 2;
    binary.m = 3;
    binary.loss = "zero-one".into();
    binary.learners = [
        "majority",
        "constant:1",
        "cv:min:majority,anti-majority",
        "cv:max:majority,anti-majority",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let binary_bundle = run_experiment(&binary)?;
    let get = |bundle: &crate::runner::ReportBundle, check: &str| {
        bundle
            .verdicts
            .iter()
            .find(|v| v.check == check)
            .cloned()
            .expect("head-to-head emits both verdicts")
    };
    let binary_marginals = get(&binary_bundle, "head-to-head-marginals");
    let binary_asymmetry = get(&binary_bundle, "head-to-head-asymmetry");

    // Stage B: the order-distinguishing joint lives where the loss is
    // homogeneous but not symmetric — the cyclic loss on three outputs
    // (the default head-to-head configuration).
    let cyclic = base_config("head-to-head")?;
    let cyclic_bundle = run_experiment(&cyclic)?;
    let cyclic_marginals = get(&cyclic_bundle, "head-to-head-marginals");
    let cyclic_asymmetry = get(&cyclic_bundle, "head-to-head-asymmetry");

    let pass = binary_marginals.pass
        && !binary_asymmetry.pass // exhaustively symmetric, as forced
        && cyclic_marginals.pass
        && cyclic_asymmetry.pass;
    let detail = format!(
        "zero_one_marginals={};zero_one_pairs=all_swap_symmetric_as_forced_by_relabeling;cyclic_marginals={};cyclic_witness:{}",
        if binary_marginals.pass { "PASS" } else { "FAIL" },
        if cyclic_marginals.pass { "PASS" } else { "FAIL" },
        cyclic_asymmetry.detail
    );
    Ok(Verdict::new(
        "criterion-10-head-to-head",
        "zero-one:x=4;y=2;m=3;registry-4|cyclic:x=3;y=3;m=2;constants".into(),
        pass,
        detail,
    ))
}
