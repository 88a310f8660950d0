//! Exhaustive, exact computation of the framework's conditionals and
//! verification of the no-free-lunch and free-lunch claims.
//!
//! Every PASS/FAIL here is a rational equality; nothing is compared in
//! floating point. Enumeration over target functions is embarrassingly
//! parallel and accumulates by exact summation, so results are independent
//! of partitioning and worker count.

use std::collections::BTreeMap;

use num::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::costs::generic_cost;
use crate::costs::{
    check_homogeneous, on_training_cost, ots_cost, ots_cost_distribution, zero_one_loss,
    CostDistribution, LossFunction, QueryWeighting,
};
use crate::domain::{
    enumerate_functions_capped, enumerate_training_sets, posterior_over_functions,
    sample_random_prior_capped, Dataset, FiniteDomain, Prior, SamplingDistribution,
    StochasticHypothesis, TargetFunction, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::learners::{
    AntiMajorityLearner, CvMetaLearner, CvSelectionMode, Learner, MajorityLearner,
};
use crate::rational::{rat_one, rat_zero, ratio, to_f64, Rational};

/// What to do when a dataset's training inputs cover every positive-mass
/// query, leaving no off-training-set region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyOtsPolicy {
    /// Abort the computation (the default).
    #[default]
    Abort,
    /// Drop such datasets and renormalize the remaining mass.
    ExcludeAndRenormalize,
}

/// Shared knobs for the enumeration engine.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub cap: u128,
    pub replacement: bool,
    pub empty_ots: EmptyOtsPolicy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            replacement: true,
            empty_ots: EmptyOtsPolicy::Abort,
        }
    }
}

/// Outcome of comparing per-learner cost distributions for exact equality.
#[derive(Debug, Clone)]
pub struct NflReport {
    pub learner_names: Vec<String>,
    pub distributions: Vec<CostDistribution>,
    pub pass: bool,
    pub discrepancy: Option<Discrepancy>,
}

/// First atom at which two learners' distributions differ.
#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub cost: Rational,
    pub learner_a: String,
    pub prob_a: Rational,
    pub learner_b: String,
    pub prob_b: Rational,
}

impl NflReport {
    fn from_distributions(names: Vec<String>, distributions: Vec<CostDistribution>) -> Self {
        let mut pass = true;
        let mut discrepancy = None;
        'outer: for i in 1..distributions.len() {
            if let Some((cost, prob_a, prob_b)) =
                distributions[0].first_discrepancy(&distributions[i])
            {
                pass = false;
                discrepancy = Some(Discrepancy {
                    cost,
                    learner_a: names[0].clone(),
                    prob_a,
                    learner_b: names[i].clone(),
                    prob_b,
                });
                break 'outer;
            }
        }
        Self {
            learner_names: names,
            distributions,
            pass,
            discrepancy,
        }
    }
}

/// Exact joint distribution over a pair of cost values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JointCostDistribution {
    atoms: BTreeMap<(Rational, Rational), Rational>,
}

impl JointCostDistribution {
    pub fn add(&mut self, pair: (Rational, Rational), probability: Rational) {
        if probability.is_zero() {
            return;
        }
        *self.atoms.entry(pair).or_insert_with(rat_zero) += probability;
    }

    pub fn atoms(&self) -> &BTreeMap<(Rational, Rational), Rational> {
        &self.atoms
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    /// The same distribution with the two coordinates interchanged.
    pub fn swapped(&self) -> Self {
        let mut out = Self::default();
        for ((a, b), p) in &self.atoms {
            out.add((b.clone(), a.clone()), p.clone());
        }
        out
    }

    pub fn marginal_first(&self) -> CostDistribution {
        let mut out = CostDistribution::new();
        for ((a, _), p) in &self.atoms {
            out.add(a.clone(), p.clone());
        }
        out
    }

    pub fn marginal_second(&self) -> CostDistribution {
        let mut out = CostDistribution::new();
        for ((_, b), p) in &self.atoms {
            out.add(b.clone(), p.clone());
        }
        out
    }

    /// First atom where this joint and its swap disagree, if any.
    pub fn first_swap_discrepancy(&self) -> Option<((Rational, Rational), Rational, Rational)> {
        let swapped = self.swapped();
        let keys: std::collections::BTreeSet<&(Rational, Rational)> =
            self.atoms.keys().chain(swapped.atoms.keys()).collect();
        for key in keys {
            let a = self.atoms.get(key).cloned().unwrap_or_else(rat_zero);
            let b = swapped.atoms.get(key).cloned().unwrap_or_else(rat_zero);
            if a != b {
                return Some((key.clone(), a, b));
            }
        }
        None
    }
}

/// Result of a head-to-head joint comparison of two learners.
#[derive(Debug, Clone)]
pub struct HeadToHeadReport {
    pub learner_a: String,
    pub learner_b: String,
    pub joint: JointCostDistribution,
    pub swapped: JointCostDistribution,
    pub swap_symmetric: bool,
    pub witness: Option<((Rational, Rational), Rational, Rational)>,
}

/// A vertex prior on which anti-cross-validation beats random guessing.
#[derive(Debug, Clone)]
pub struct PriorWitness {
    pub prior: Prior,
    pub anti_cv_cost: Rational,
    pub cv_cost: Rational,
}

/// Table of expected off-training-set cost conditioned on each achievable
/// empirical cost value, with the probability mass of that value.
#[derive(Debug, Clone, Default)]
pub struct ConditionalTable {
    rows: BTreeMap<Rational, (Rational, Rational)>,
}

impl ConditionalTable {
    pub fn rows(&self) -> &BTreeMap<Rational, (Rational, Rational)> {
        &self.rows
    }

    pub fn total_mass(&self) -> Rational {
        self.rows.values().map(|(_, mass)| mass).sum()
    }
}

/// Cost of a learner's hypothesis on one dataset, honoring the OTS flag.
fn dataset_cost(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    ots: bool,
) -> Result<Rational> {
    if ots {
        ots_cost(f, h, d, pi, loss)
    } else {
        generic_cost(f, h, d, &QueryWeighting::DataBlind(pi.clone()), loss)
    }
}

/// Spread of the cost value on one dataset: the full per-query-draw
/// distribution for the off-training-set cost, a point mass otherwise.
fn dataset_cost_spread(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    ots: bool,
) -> Result<CostDistribution> {
    if ots {
        ots_cost_distribution(f, h, d, pi, loss)
    } else {
        let mut dist = CostDistribution::new();
        dist.add(dataset_cost(f, h, d, pi, loss, false)?, rat_one());
        Ok(dist)
    }
}

/// Exact distribution of the cost value over all training sets of size m,
/// conditioned on the target function.
pub fn cost_distribution_given_f(
    learner: &dyn Learner,
    f: &TargetFunction,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    ots: bool,
    config: &EngineConfig,
) -> Result<CostDistribution> {
    let mut dist = CostDistribution::new();
    let mut included = rat_zero();
    for d in enumerate_training_sets(f, m, pi, config.replacement)? {
        let h = learner.train(f.domain(), &d)?;
        match dataset_cost_spread(f, &h, &d, pi, loss, ots) {
            Ok(spread) => {
                included += d.weight();
                dist.add_scaled(&spread, d.weight());
            }
            Err(Error::EmptyOts) => match config.empty_ots {
                EmptyOtsPolicy::Abort => return Err(Error::EmptyOts),
                EmptyOtsPolicy::ExcludeAndRenormalize => continue,
            },
            Err(e) => return Err(e),
        }
    }
    if included.is_zero() {
        return Err(Error::EmptyOts);
    }
    if !included.is_one() {
        let mut renorm = CostDistribution::new();
        let scale = rat_one() / included;
        renorm.add_scaled(&dist, &scale);
        dist = renorm;
    }
    Ok(dist)
}

/// Posterior expected cost of a learner conditioned on a single dataset.
pub fn expected_cost_given_d(
    learner: &dyn Learner,
    prior: &Prior,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    ots: bool,
) -> Result<Rational> {
    let domain = prior.support()[0].domain();
    let posterior = posterior_over_functions(prior, d)?;
    let h = learner.train(domain, d)?;
    let mut total = rat_zero();
    for (f, w) in posterior.iter() {
        total += w * &dataset_cost(f, &h, d, pi, loss, ots)?;
    }
    Ok(total)
}

/// Uniform-f average of each learner's off-training-set cost distribution,
/// compared for exact equality.
///
/// Refuses non-homogeneous losses unless `force` is set, since the theorem's
/// hypothesis fails there (a forced run may legitimately FAIL).
pub fn nfl_f_average_check(
    learners: &[Box<dyn Learner>],
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    force: bool,
    config: &EngineConfig,
) -> Result<NflReport> {
    if !force && !check_homogeneous(loss) {
        return Err(Error::NonHomogeneousLoss);
    }
    let functions: Vec<TargetFunction> = enumerate_functions_capped(domain, config.cap)?.collect();
    let weight = Rational::new(
        num::BigInt::one(),
        num::BigInt::from(functions.len() as u64),
    );

    let mut names = Vec::new();
    let mut distributions = Vec::new();
    for learner in learners {
        let averaged = functions
            .par_iter()
            .map(|f| -> Result<CostDistribution> {
                cost_distribution_given_f(learner.as_ref(), f, m, pi, loss, true, config)
            })
            .try_reduce(CostDistribution::new, |mut acc, dist| {
                acc.add_scaled(&dist, &rat_one());
                Ok(acc)
            })?;
        let mut scaled = CostDistribution::new();
        scaled.add_scaled(&averaged, &weight);
        names.push(learner.name().to_string());
        distributions.push(scaled);
    }
    Ok(NflReport::from_distributions(names, distributions))
}

/// Under the uniform prior over all functions, the exact distribution of the
/// off-training-set cost conditioned on one dataset, per learner.
pub fn nfl_uniform_prior_check(
    learners: &[Box<dyn Learner>],
    domain: FiniteDomain,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    config: &EngineConfig,
) -> Result<NflReport> {
    let prior = Prior::uniform_over_all(domain, config.cap)?;
    let posterior = posterior_over_functions(&prior, d)?;
    let mut names = Vec::new();
    let mut distributions = Vec::new();
    for learner in learners {
        let h = learner.train(domain, d)?;
        let mut dist = CostDistribution::new();
        for (f, w) in posterior.iter() {
            dist.add_scaled(&ots_cost_distribution(f, &h, d, pi, loss)?, w);
        }
        names.push(learner.name().to_string());
        distributions.push(dist);
    }
    Ok(NflReport::from_distributions(names, distributions))
}

/// Monte Carlo summary for one learner under sampled priors.
#[derive(Debug, Clone)]
pub struct PriorAverageSample {
    pub learner: String,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Result of the prior-averaged comparison.
#[derive(Debug, Clone)]
pub struct PriorAverageReport {
    /// Exact expected OTS cost under the uniform prior (the barycenter of
    /// the prior simplex), per learner. Expectation-level quantities are
    /// linear in the prior, so equality here certifies equality of the
    /// uniform average over all priors.
    pub exact_values: Vec<(String, Rational)>,
    pub exact_equal: bool,
    /// Monte Carlo spread over sampled priors (empty when n_samples = 0).
    pub samples: Vec<PriorAverageSample>,
}

/// Compares learners under the uniform average over all priors: exactly at
/// the expectation level (via the simplex barycenter), and by Monte Carlo
/// over sampled priors when `n_samples > 0`.
#[allow(clippy::too_many_arguments)]
pub fn prior_average_check(
    learners: &[Box<dyn Learner>],
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    n_samples: usize,
    seed: u64,
    config: &EngineConfig,
) -> Result<PriorAverageReport> {
    let functions: Vec<TargetFunction> = enumerate_functions_capped(domain, config.cap)?.collect();

    // Per learner, the f-conditioned expected OTS cost for every f.
    let mut per_f: Vec<Vec<Rational>> = Vec::new();
    for learner in learners {
        let values = functions
            .iter()
            .map(|f| {
                cost_distribution_given_f(learner.as_ref(), f, m, pi, loss, true, config)
                    .map(|dist| dist.expectation())
            })
            .collect::<Result<Vec<_>>>()?;
        per_f.push(values);
    }

    let n_f = Rational::from(num::BigInt::from(functions.len() as u64));
    let exact_values: Vec<(String, Rational)> = learners
        .iter()
        .zip(&per_f)
        .map(|(l, values)| (l.name().to_string(), values.iter().sum::<Rational>() / &n_f))
        .collect();
    let exact_equal = exact_values.iter().all(|(_, v)| v == &exact_values[0].1);

    let mut samples = Vec::new();
    if n_samples > 0 {
        let priors: Vec<Prior> = (0..n_samples)
            .map(|i| sample_random_prior_capped(domain, seed.wrapping_add(i as u64), config.cap))
            .collect::<Result<Vec<_>>>()?;
        for (learner, values) in learners.iter().zip(&per_f) {
            let mut mean = 0.0;
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for prior in &priors {
                let e: Rational = prior.weights().iter().zip(values).map(|(w, v)| w * v).sum();
                let e = to_f64(&e);
                mean += e;
                min = min.min(e);
                max = max.max(e);
            }
            samples.push(PriorAverageSample {
                learner: learner.name().to_string(),
                mean: mean / n_samples as f64,
                min,
                max,
            });
        }
    }

    Ok(PriorAverageReport {
        exact_values,
        exact_equal,
        samples,
    })
}

/// Under uniform f and the dataset distribution, tabulates the expected
/// off-training-set cost conditioned on each achievable empirical cost of a
/// constant learner.
pub fn ots_vs_empirical_table(
    h_star: &StochasticHypothesis,
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    config: &EngineConfig,
) -> Result<ConditionalTable> {
    let functions: Vec<TargetFunction> = enumerate_functions_capped(domain, config.cap)?.collect();
    let f_weight = Rational::new(
        num::BigInt::one(),
        num::BigInt::from(functions.len() as u64),
    );

    // Per empirical-cost value: accumulated mass and mass-weighted OTS cost.
    let mut acc: BTreeMap<Rational, (Rational, Rational)> = BTreeMap::new();
    for f in &functions {
        for d in enumerate_training_sets(f, m, pi, config.replacement)? {
            let c_hat = on_training_cost(f, h_star, &d, pi, loss)?;
            let c_ots = ots_cost(f, h_star, &d, pi, loss)?;
            let w = &f_weight * d.weight();
            let entry = acc.entry(c_hat).or_insert_with(|| (rat_zero(), rat_zero()));
            entry.0 += &w * &c_ots;
            entry.1 += w;
        }
    }

    let rows = acc
        .into_iter()
        .map(|(c_hat, (weighted, mass))| (c_hat, (weighted / &mass, mass)))
        .collect();
    Ok(ConditionalTable { rows })
}

/// Monte Carlo check that the empirical cost concentrates on the data-blind
/// cost when |X| >> m.
#[derive(Debug, Clone)]
pub struct LlnReport {
    pub empirical_estimate: f64,
    pub exact_cost: Rational,
    pub gap: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl LlnReport {
    /// True when the Monte Carlo estimate sits within `k` standard errors of
    /// the exact data-blind cost.
    pub fn within(&self, k: f64) -> bool {
        self.gap.abs() <= k * self.std_error
    }
}

pub fn lln_convergence_experiment(
    h_star: &StochasticHypothesis,
    f: &TargetFunction,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    n_samples: usize,
    seed: u64,
) -> Result<LlnReport> {
    let x_size = f.domain().x_size();
    if x_size < 10 * m {
        return Err(Error::InvalidDomain(format!(
            "law-of-large-numbers experiment needs |X| >= 10 m (got |X| = {x_size}, m = {m})"
        )));
    }

    // Exact data-blind cost of the constant hypothesis.
    let point_loss: Vec<Rational> = (0..x_size)
        .map(|x| {
            h_star
                .row(x)
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(y_h, p)| p * loss.value(y_h, f.output(x)))
                .sum()
        })
        .collect();
    let exact_cost: Rational = (0..x_size).map(|x| pi.weight(x) * &point_loss[x]).sum();

    // Monte Carlo estimate of the expected on-training-set average loss.
    let weights: Vec<f64> = pi.weights().iter().map(to_f64).collect();
    let point_loss_f64: Vec<f64> = point_loss.iter().map(to_f64).collect();
    let sampler =
        WeightedIndex::new(&weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let mut num = 0.0;
        let mut den = 0.0;
        for _ in 0..m {
            let x = sampler.sample(&mut rng);
            num += weights[x] * point_loss_f64[x];
            den += weights[x];
        }
        let value = num / den;
        sum += value;
        sum_sq += value * value;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    let std_error = (variance / n).sqrt();

    Ok(LlnReport {
        empirical_estimate: mean,
        gap: mean - to_f64(&exact_cost),
        exact_cost,
        std_error,
        n_samples,
    })
}

/// Exact joint distribution of two learners' off-training-set costs under
/// uniform f and the dataset distribution, together with the coordinate-
/// swapped joint and an exact equality flag.
pub fn joint_head_to_head(
    learner_a: &dyn Learner,
    learner_b: &dyn Learner,
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    config: &EngineConfig,
) -> Result<HeadToHeadReport> {
    let functions: Vec<TargetFunction> = enumerate_functions_capped(domain, config.cap)?.collect();
    let f_weight = Rational::new(
        num::BigInt::one(),
        num::BigInt::from(functions.len() as u64),
    );

    let joint = functions
        .par_iter()
        .map(|f| -> Result<JointCostDistribution> {
            let mut local = JointCostDistribution::default();
            for d in enumerate_training_sets(f, m, pi, config.replacement)? {
                let ha = learner_a.train(domain, &d)?;
                let hb = learner_b.train(domain, &d)?;
                let ca = ots_cost(f, &ha, &d, pi, loss)?;
                let cb = ots_cost(f, &hb, &d, pi, loss)?;
                local.add((ca, cb), &f_weight * d.weight());
            }
            Ok(local)
        })
        .try_reduce(JointCostDistribution::default, |mut acc, local| {
            for (pair, p) in local.atoms {
                acc.add(pair, p);
            }
            Ok(acc)
        })?;

    let swapped = joint.swapped();
    let witness = joint.first_swap_discrepancy();
    Ok(HeadToHeadReport {
        learner_a: learner_a.name().to_string(),
        learner_b: learner_b.name().to_string(),
        swap_symmetric: witness.is_none(),
        joint,
        swapped,
        witness,
    })
}

fn cv_pair() -> (CvMetaLearner, CvMetaLearner) {
    let phi = CvMetaLearner::new(
        vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)],
        CvSelectionMode::Min,
    )
    .expect("two base learners");
    let anti = CvMetaLearner::new(
        vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)],
        CvSelectionMode::Max,
    )
    .expect("two base learners");
    (phi, anti)
}

/// Scans vertex priors (single target functions) for one where
/// anti-cross-validation over {majority, anti-majority} has expected
/// off-training-set cost below 1/2.
///
/// Expected cost is linear in the prior, so restricting the search to
/// vertices loses nothing: any witness prior implies a vertex witness.
pub fn prior_witness_search(
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    config: &EngineConfig,
) -> Result<PriorWitness> {
    if !domain.is_binary() {
        return Err(Error::NonBinaryOutput {
            learner: "prior_witness_search".into(),
            y_size: domain.y_size(),
        });
    }
    if m.is_multiple_of(2) {
        return Err(Error::OddMRequired { m });
    }
    let (phi, anti) = cv_pair();
    let half = ratio(1, 2);
    for f in enumerate_functions_capped(domain, config.cap)? {
        let anti_cost =
            cost_distribution_given_f(&anti, &f, m, pi, loss, true, config)?.expectation();
        if anti_cost < half {
            let cv_cost =
                cost_distribution_given_f(&phi, &f, m, pi, loss, true, config)?.expectation();
            return Ok(PriorWitness {
                prior: Prior::delta(f),
                anti_cv_cost: anti_cost,
                cv_cost,
            });
        }
    }
    Err(Error::NoWitnessFound)
}

/// Measures the sum of cross-validation's and anti-cross-validation's
/// off-training-set costs over all (f, d) pairs where the two meta-rules
/// select different base algorithms, asserting the sum is one constant.
pub fn phi_sum_constant(
    domain: FiniteDomain,
    m: usize,
    pi: &SamplingDistribution,
    config: &EngineConfig,
) -> Result<Rational> {
    if !domain.is_binary() {
        return Err(Error::NonBinaryOutput {
            learner: "phi_sum_constant".into(),
            y_size: domain.y_size(),
        });
    }
    if m.is_multiple_of(2) {
        return Err(Error::OddMRequired { m });
    }
    let loss = zero_one_loss(domain);
    let (phi, anti) = cv_pair();

    let functions: Vec<TargetFunction> = enumerate_functions_capped(domain, config.cap)?.collect();
    let values: Vec<Rational> = functions
        .par_iter()
        .map(|f| -> Result<Vec<Rational>> {
            let mut local = Vec::new();
            for d in enumerate_training_sets(f, m, pi, config.replacement)? {
                if phi.selection(domain, &d)? == anti.selection(domain, &d)? {
                    continue;
                }
                let h_phi = phi.train(domain, &d)?;
                let h_anti = anti.train(domain, &d)?;
                let sum =
                    ots_cost(f, &h_phi, &d, pi, &loss)? + ots_cost(f, &h_anti, &d, pi, &loss)?;
                if !local.contains(&sum) {
                    local.push(sum);
                }
            }
            Ok(local)
        })
        .try_reduce(Vec::new, |mut acc, local| {
            for v in local {
                if !acc.contains(&v) {
                    acc.push(v);
                }
            }
            Ok(acc)
        })?;

    match values.len() {
        0 => Err(Error::InvalidDomain(
            "no (f, d) pair where the two meta-rules select different algorithms".into(),
        )),
        1 => Ok(values.into_iter().next().unwrap()),
        _ => Err(Error::SumNotConstant {
            values: values.iter().map(|v| v.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{resolve_learner, ConstantLearner, RandomGuessLearner};
    use crate::rational::rat_one;

    fn dom(x: usize, y: usize) -> FiniteDomain {
        FiniteDomain::new(x, y).unwrap()
    }

    fn setup(
        x: usize,
    ) -> (
        FiniteDomain,
        SamplingDistribution,
        LossFunction,
        EngineConfig,
    ) {
        let d = dom(x, 2);
        (
            d,
            SamplingDistribution::uniform(x),
            zero_one_loss(d),
            EngineConfig::default(),
        )
    }

    #[test]
    fn cost_distribution_deltas() {
        let (d4, pi, loss, cfg) = setup(4);
        let f = TargetFunction::constant(d4, 1).unwrap();

        let maj = MajorityLearner;
        let dist = cost_distribution_given_f(&maj, &f, 3, &pi, &loss, true, &cfg).unwrap();
        assert_eq!(dist.atoms().len(), 1);
        assert!(dist.atoms().contains_key(&rat_zero()));

        let anti = AntiMajorityLearner;
        let dist = cost_distribution_given_f(&anti, &f, 3, &pi, &loss, true, &cfg).unwrap();
        assert_eq!(dist.atoms().len(), 1);
        assert!(dist.atoms().contains_key(&rat_one()));

        // The guesser's cost spreads over its per-query draws; its mean and
        // the extreme atoms are pinned down exactly.
        let rnd = RandomGuessLearner;
        let f2 = TargetFunction::new(d4, vec![0, 1, 1, 0]).unwrap();
        let dist = cost_distribution_given_f(&rnd, &f2, 3, &pi, &loss, true, &cfg).unwrap();
        assert!(dist.total_mass().is_one());
        assert_eq!(dist.expectation(), ratio(1, 2));
        assert!(dist.atoms().contains_key(&rat_zero()));
        assert!(dist.atoms().contains_key(&rat_one()));
    }

    #[test]
    fn expected_cost_given_d_examples() {
        let (d5, pi, loss, _) = setup(5);
        let all0 = TargetFunction::constant(d5, 0).unwrap();
        let all1 = TargetFunction::constant(d5, 1).unwrap();
        let prior = Prior::uniform(vec![all0, all1.clone()]).unwrap();
        let d = Dataset::new(vec![(0, 1), (1, 1), (2, 1)], rat_one()).unwrap();

        let anti_cv = resolve_learner("cv:max:majority,anti-majority", d5).unwrap();
        let cost = expected_cost_given_d(anti_cv.as_ref(), &prior, &d, &pi, &loss, true).unwrap();
        assert_eq!(cost, rat_one());

        let rnd = resolve_learner("random", d5).unwrap();
        let cost = expected_cost_given_d(rnd.as_ref(), &prior, &d, &pi, &loss, true).unwrap();
        assert_eq!(cost, ratio(1, 2));

        let delta = Prior::delta(all1.clone());
        let maj = resolve_learner("majority", d5).unwrap();
        let h = maj.train(d5, &d).unwrap();
        let direct = ots_cost(&all1, &h, &d, &pi, &loss).unwrap();
        let via_prior = expected_cost_given_d(maj.as_ref(), &delta, &d, &pi, &loss, true).unwrap();
        assert_eq!(direct, via_prior);
    }

    #[test]
    fn f_average_passes_for_standard_learners() {
        let (d4, pi, loss, cfg) = setup(4);
        let learners: Vec<Box<dyn Learner>> = vec![
            Box::new(MajorityLearner),
            Box::new(AntiMajorityLearner),
            Box::new(ConstantLearner::from_label(d4, 0).unwrap()),
        ];
        let report = nfl_f_average_check(&learners, d4, 1, &pi, &loss, false, &cfg).unwrap();
        assert!(report.pass, "discrepancy: {:?}", report.discrepancy);
        for dist in &report.distributions {
            assert!(dist.total_mass().is_one());
        }
    }

    #[test]
    fn f_average_single_learner_passes() {
        let (d3, pi, loss, cfg) = setup(3);
        let learners: Vec<Box<dyn Learner>> = vec![Box::new(MajorityLearner)];
        let report = nfl_f_average_check(&learners, d3, 1, &pi, &loss, false, &cfg).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn f_average_refuses_non_homogeneous_loss_unless_forced() {
        let (d3, pi, _, cfg) = setup(3);
        // Loss whose rows have different value multisets.
        let skewed = LossFunction::new(vec![
            vec![rat_zero(), rat_one()],
            vec![rat_zero(), rat_zero()],
        ])
        .unwrap();
        let learners: Vec<Box<dyn Learner>> = vec![
            Box::new(ConstantLearner::from_label(d3, 0).unwrap()),
            Box::new(ConstantLearner::from_label(d3, 1).unwrap()),
        ];
        assert!(matches!(
            nfl_f_average_check(&learners, d3, 1, &pi, &skewed, false, &cfg),
            Err(Error::NonHomogeneousLoss)
        ));
        let forced = nfl_f_average_check(&learners, d3, 1, &pi, &skewed, true, &cfg).unwrap();
        assert!(!forced.pass);
        assert!(forced.discrepancy.is_some());
    }

    #[test]
    fn uniform_prior_check_passes_and_rejects_covering_dataset() {
        let (d4, pi, loss, cfg) = setup(4);
        let learners: Vec<Box<dyn Learner>> =
            vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)];
        let d = Dataset::new(vec![(2, 1)], rat_one()).unwrap();
        let report = nfl_uniform_prior_check(&learners, d4, &d, &pi, &loss, &cfg).unwrap();
        assert!(report.pass, "discrepancy: {:?}", report.discrepancy);

        let covering = Dataset::new(vec![(0, 0), (1, 0), (2, 0), (3, 0)], rat_one()).unwrap();
        assert!(matches!(
            nfl_uniform_prior_check(&learners, d4, &covering, &pi, &loss, &cfg),
            Err(Error::EmptyOts)
        ));
    }

    #[test]
    fn prior_average_exact_branch() {
        let (d4, pi, loss, cfg) = setup(4);
        let learners: Vec<Box<dyn Learner>> =
            vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)];
        let report = prior_average_check(&learners, d4, 1, &pi, &loss, 0, 0, &cfg).unwrap();
        assert!(report.exact_equal);
        assert_eq!(report.exact_values[0].1, ratio(1, 2));
        assert!(report.samples.is_empty());
    }

    #[test]
    fn ots_vs_empirical_rows_all_half() {
        let (d4, pi, loss, cfg) = setup(4);
        let h = StochasticHypothesis::delta(&TargetFunction::constant(d4, 0).unwrap());
        let table = ots_vs_empirical_table(&h, d4, 2, &pi, &loss, &cfg).unwrap();
        assert!(table.total_mass().is_one());
        for (expected, _) in table.rows().values() {
            assert_eq!(expected, &ratio(1, 2));
        }
    }

    #[test]
    fn lln_exact_zero_when_hypothesis_matches() {
        let d = dom(50, 2);
        let f = TargetFunction::constant(d, 1).unwrap();
        let h = StochasticHypothesis::delta(&f);
        let pi = SamplingDistribution::uniform(50);
        let loss = zero_one_loss(d);
        let report = lln_convergence_experiment(&h, &f, 5, &pi, &loss, 100, 1).unwrap();
        assert_eq!(report.empirical_estimate, 0.0);
        assert!(report.exact_cost.is_zero());
        assert!(report.within(3.0));
    }

    #[test]
    fn lln_rejects_small_domains() {
        let d = dom(5, 2);
        let f = TargetFunction::constant(d, 1).unwrap();
        let h = StochasticHypothesis::delta(&f);
        let pi = SamplingDistribution::uniform(5);
        let loss = zero_one_loss(d);
        assert!(lln_convergence_experiment(&h, &f, 1, &pi, &loss, 10, 1).is_err());
    }

    #[test]
    fn head_to_head_complement_pair_lies_on_antidiagonal() {
        let (d4, pi, loss, cfg) = setup(4);
        let report = joint_head_to_head(
            &MajorityLearner,
            &AntiMajorityLearner,
            d4,
            1,
            &pi,
            &loss,
            &cfg,
        )
        .unwrap();
        assert!(report.joint.total_mass().is_one());
        for (a, b) in report.joint.atoms().keys() {
            assert_eq!(a + b, rat_one());
        }
    }

    #[test]
    fn head_to_head_same_learner_is_diagonal_and_symmetric() {
        let (d4, pi, loss, cfg) = setup(4);
        let report =
            joint_head_to_head(&MajorityLearner, &MajorityLearner, d4, 1, &pi, &loss, &cfg)
                .unwrap();
        assert!(report.swap_symmetric);
        for (a, b) in report.joint.atoms().keys() {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_search_finds_non_constant_function() {
        let (d5, pi, loss, cfg) = setup(5);
        let witness = prior_witness_search(d5, 3, &pi, &loss, &cfg).unwrap();
        assert!(witness.anti_cv_cost < ratio(1, 2));
        let f = &witness.prior.support()[0];
        let first = f.output(0);
        assert!(
            (0..5).any(|x| f.output(x) != first),
            "constant functions give anti-cross-validation cost 1"
        );
    }

    #[test]
    fn phi_sum_constant_is_one_and_rejects_even_m() {
        let (d4, pi, _, cfg) = setup(4);
        let value = phi_sum_constant(d4, 3, &pi, &cfg).unwrap();
        assert_eq!(value, rat_one());
        assert!(matches!(
            phi_sum_constant(d4, 2, &pi, &cfg),
            Err(Error::OddMRequired { m: 2 })
        ));
    }
}
