//! The concrete learning algorithms and the cross-validation /
//! anti-cross-validation meta-learners.
//!
//! Every learner is a deterministic map from a training set to a hypothesis
//! distribution; equal datasets always produce identical hypotheses.

use num::Zero;

use crate::costs::{zero_one_loss, LossFunction};
use crate::domain::{Dataset, FiniteDomain, StochasticHypothesis};
use crate::error::{Error, Result};
use crate::rational::{rat_zero, Rational};

/// A deterministic learning rule.
pub trait Learner: Send + Sync {
    fn name(&self) -> &str;
    fn train(&self, domain: FiniteDomain, d: &Dataset) -> Result<StochasticHypothesis>;
}

/// Which end of the cross-validation ranking a meta-learner selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvSelectionMode {
    /// Pick the base algorithm with the lowest leave-one-out error.
    Min,
    /// Pick the base algorithm with the highest leave-one-out error
    /// ("anti-cross-validation").
    Max,
}

fn require_binary(domain: FiniteDomain, learner: &str) -> Result<()> {
    if !domain.is_binary() {
        return Err(Error::NonBinaryOutput {
            learner: learner.into(),
            y_size: domain.y_size(),
        });
    }
    Ok(())
}

/// The label more common in d_Y, with ties going to 1.
fn majority_label(d: &Dataset) -> usize {
    let ones = d.pairs().iter().filter(|&&(_, y)| y == 1).count();
    let zeros = d.len() - ones;
    if ones >= zeros {
        1
    } else {
        0
    }
}

/// Memorize the training data (latest pair wins on a duplicate input) and
/// predict `ots_label` everywhere else.
fn memorize_with_fallback(
    domain: FiniteDomain,
    d: &Dataset,
    ots_label: usize,
) -> Result<StochasticHypothesis> {
    let outputs: Vec<usize> = (0..domain.x_size())
        .map(|x| d.latest_label(x).unwrap_or(ots_label))
        .collect();
    StochasticHypothesis::delta_outputs(domain, outputs)
}

/// Predicts the more common training label at every off-training-set query
/// and reproduces d_Y on the training inputs.
pub struct MajorityLearner;

impl Learner for MajorityLearner {
    fn name(&self) -> &str {
        "majority"
    }

    fn train(&self, domain: FiniteDomain, d: &Dataset) -> Result<StochasticHypothesis> {
        require_binary(domain, self.name())?;
        memorize_with_fallback(domain, d, majority_label(d))
    }
}

/// Predicts the complement of the majority label off the training set; same
/// on-training-set behavior as [`MajorityLearner`].
pub struct AntiMajorityLearner;

impl Learner for AntiMajorityLearner {
    fn name(&self) -> &str {
        "anti-majority"
    }

    fn train(&self, domain: FiniteDomain, d: &Dataset) -> Result<StochasticHypothesis> {
        require_binary(domain, self.name())?;
        memorize_with_fallback(domain, d, 1 - majority_label(d))
    }
}

/// Ignores the data and always emits the same hypothesis.
pub struct ConstantLearner {
    name: String,
    hypothesis: StochasticHypothesis,
}

impl ConstantLearner {
    pub fn new(hypothesis: StochasticHypothesis) -> Self {
        Self {
            name: "constant".into(),
            hypothesis,
        }
    }

    /// Constant learner emitting the all-`label` deterministic hypothesis.
    pub fn from_label(domain: FiniteDomain, label: usize) -> Result<Self> {
        let f = crate::domain::TargetFunction::constant(domain, label)?;
        Ok(Self {
            name: format!("constant:{label}"),
            hypothesis: StochasticHypothesis::delta(&f),
        })
    }

    pub fn hypothesis(&self) -> &StochasticHypothesis {
        &self.hypothesis
    }
}

impl Learner for ConstantLearner {
    fn name(&self) -> &str {
        &self.name
    }

    fn train(&self, domain: FiniteDomain, _d: &Dataset) -> Result<StochasticHypothesis> {
        if domain != self.hypothesis.domain() {
            return Err(Error::InvalidDomain(
                "constant learner hypothesis was built for a different domain".into(),
            ));
        }
        Ok(self.hypothesis.clone())
    }
}

/// Guesses uniformly at random at every query (as a stochastic hypothesis).
pub struct RandomGuessLearner;

impl Learner for RandomGuessLearner {
    fn name(&self) -> &str {
        "random"
    }

    fn train(&self, domain: FiniteDomain, _d: &Dataset) -> Result<StochasticHypothesis> {
        require_binary(domain, self.name())?;
        Ok(StochasticHypothesis::uniform(domain))
    }
}

/// Expected loss of h's prediction at x against the true label y.
fn point_loss(h: &StochasticHypothesis, x: usize, y: usize, loss: &LossFunction) -> Rational {
    h.row(x)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(y_h, p)| p * loss.value(y_h, y))
        .sum()
}

/// Leave-one-out cross-validation error: average over folds of the loss at
/// the held-out pair after retraining on the rest.
pub fn loo_cv_error(
    algo: &dyn Learner,
    domain: FiniteDomain,
    d: &Dataset,
    loss: &LossFunction,
) -> Result<Rational> {
    if d.len() < 2 {
        return Err(Error::DatasetTooSmall {
            m: d.len(),
            required: 2,
        });
    }
    let mut total = rat_zero();
    for i in 0..d.len() {
        let fold = d.without_pair(i)?;
        let h = algo.train(domain, &fold)?;
        let (x, y) = d.pairs()[i];
        total += point_loss(&h, x, y, loss);
    }
    Ok(total / Rational::from(num::BigInt::from(d.len() as u64)))
}

/// Meta-learner that ranks its base algorithms by leave-one-out error and
/// trains the selected one on the full dataset. Ties go to the lowest index.
pub struct CvMetaLearner {
    name: String,
    base: Vec<Box<dyn Learner>>,
    mode: CvSelectionMode,
}

impl CvMetaLearner {
    pub fn new(base: Vec<Box<dyn Learner>>, mode: CvSelectionMode) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::InvalidDomain(
                "cv meta-learner needs at least one base algorithm".into(),
            ));
        }
        let tag = match mode {
            CvSelectionMode::Min => "min",
            CvSelectionMode::Max => "max",
        };
        let names: Vec<&str> = base.iter().map(|a| a.name()).collect();
        Ok(Self {
            name: format!("cv:{tag}:{}", names.join(",")),
            base,
            mode,
        })
    }

    /// Index of the base algorithm the meta-rule selects for this dataset.
    pub fn selection(&self, domain: FiniteDomain, d: &Dataset) -> Result<usize> {
        let loss = zero_one_loss(domain);
        let mut best = 0usize;
        let mut best_err = loo_cv_error(self.base[0].as_ref(), domain, d, &loss)?;
        for (i, algo) in self.base.iter().enumerate().skip(1) {
            let err = loo_cv_error(algo.as_ref(), domain, d, &loss)?;
            let better = match self.mode {
                CvSelectionMode::Min => err < best_err,
                CvSelectionMode::Max => err > best_err,
            };
            if better {
                best = i;
                best_err = err;
            }
        }
        Ok(best)
    }
}

impl Learner for CvMetaLearner {
    fn name(&self) -> &str {
        &self.name
    }

    fn train(&self, domain: FiniteDomain, d: &Dataset) -> Result<StochasticHypothesis> {
        let chosen = self.selection(domain, d)?;
        self.base[chosen].train(domain, d)
    }
}

/// Resolves a learner name from the CLI registry syntax:
/// `majority`, `anti-majority`, `constant:<label>`, `random`,
/// `cv:<min|max>:<name>,<name>,...`.
pub fn resolve_learner(name: &str, domain: FiniteDomain) -> Result<Box<dyn Learner>> {
    match name {
        "majority" => return Ok(Box::new(MajorityLearner)),
        "anti-majority" => return Ok(Box::new(AntiMajorityLearner)),
        "random" => return Ok(Box::new(RandomGuessLearner)),
        _ => {}
    }
    if let Some(label) = name.strip_prefix("constant:") {
        let label: usize = label
            .parse()
            .map_err(|_| Error::UnknownLearner(name.into()))?;
        if label >= domain.y_size() {
            return Err(Error::UnknownLearner(name.into()));
        }
        return Ok(Box::new(ConstantLearner::from_label(domain, label)?));
    }
    if let Some(rest) = name.strip_prefix("cv:") {
        let (mode, list) = rest
            .split_once(':')
            .ok_or_else(|| Error::UnknownLearner(name.into()))?;
        let mode = match mode {
            "min" => CvSelectionMode::Min,
            "max" => CvSelectionMode::Max,
            _ => return Err(Error::UnknownLearner(name.into())),
        };
        let base = list
            .split(',')
            .map(|n| resolve_learner(n.trim(), domain))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Box::new(CvMetaLearner::new(base, mode)?));
    }
    Err(Error::UnknownLearner(name.into()))
}

/// The names the registry resolves out of the box (cv learners compose them).
pub fn builtin_learner_names() -> Vec<&'static str> {
    vec![
        "majority",
        "anti-majority",
        "constant:<label>",
        "random",
        "cv:<min|max>:<name>,<name>,...",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_one, ratio};

    fn dom(x: usize, y: usize) -> FiniteDomain {
        FiniteDomain::new(x, y).unwrap()
    }

    fn dataset(pairs: &[(usize, usize)]) -> Dataset {
        Dataset::new(pairs.to_vec(), rat_one()).unwrap()
    }

    fn ots_prediction(h: &StochasticHypothesis, d: &Dataset) -> usize {
        let domain = h.domain();
        let q = (0..domain.x_size())
            .find(|&x| !d.contains_input(x))
            .expect("no off-training-set query");
        h.deterministic_output(q).expect("stochastic prediction")
    }

    #[test]
    fn majority_predictions() {
        let d5 = dom(5, 2);
        let maj = MajorityLearner;
        let d = dataset(&[(0, 1), (1, 1), (2, 0)]);
        let h = maj.train(d5, &d).unwrap();
        assert_eq!(ots_prediction(&h, &d), 1);
        assert_eq!(h.deterministic_output(2), Some(0)); // memorized

        let d = dataset(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(ots_prediction(&maj.train(d5, &d).unwrap(), &d), 0);

        // tie goes to label 1
        let d = dataset(&[(0, 0), (1, 1)]);
        assert_eq!(ots_prediction(&maj.train(d5, &d).unwrap(), &d), 1);
    }

    #[test]
    fn anti_majority_is_ots_complement_of_majority() {
        let d5 = dom(5, 2);
        let d = dataset(&[(0, 1), (1, 1), (2, 0)]);
        let h = AntiMajorityLearner.train(d5, &d).unwrap();
        assert_eq!(ots_prediction(&h, &d), 0);
        assert_eq!(h.deterministic_output(2), Some(0)); // same memorization

        let d = dataset(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(
            ots_prediction(&AntiMajorityLearner.train(d5, &d).unwrap(), &d),
            1
        );
    }

    #[test]
    fn majority_rejects_non_binary() {
        let d = dataset(&[(0, 1)]);
        assert!(MajorityLearner.train(dom(3, 3), &d).is_err());
    }

    #[test]
    fn constant_learner_ignores_data() {
        let d3 = dom(3, 2);
        let learner = ConstantLearner::from_label(d3, 0).unwrap();
        let h1 = learner.train(d3, &dataset(&[(0, 1)])).unwrap();
        let h2 = learner.train(d3, &dataset(&[(1, 0), (2, 1)])).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.deterministic_output(1), Some(0));
    }

    #[test]
    fn random_guess_is_uniform() {
        let d3 = dom(3, 2);
        let h = RandomGuessLearner.train(d3, &dataset(&[(0, 1)])).unwrap();
        for x in 0..3 {
            assert_eq!(h.row(x), &[ratio(1, 2), ratio(1, 2)]);
        }
    }

    #[test]
    fn loo_cv_errors() {
        let d5 = dom(5, 2);
        let loss = zero_one_loss(d5);
        let all1 = dataset(&[(0, 1), (1, 1), (2, 1)]);
        assert!(loo_cv_error(&MajorityLearner, d5, &all1, &loss)
            .unwrap()
            .is_zero());
        assert_eq!(
            loo_cv_error(&AntiMajorityLearner, d5, &all1, &loss).unwrap(),
            rat_one()
        );
        let mixed = dataset(&[(0, 1), (1, 1), (2, 0)]);
        assert_eq!(
            loo_cv_error(&MajorityLearner, d5, &mixed, &loss).unwrap(),
            ratio(1, 3)
        );
    }

    #[test]
    fn loo_requires_two_pairs() {
        let d5 = dom(5, 2);
        let loss = zero_one_loss(d5);
        let d = dataset(&[(0, 1)]);
        assert!(matches!(
            loo_cv_error(&MajorityLearner, d5, &d, &loss),
            Err(Error::DatasetTooSmall { .. })
        ));
    }

    #[test]
    fn cv_meta_selects_by_mode() {
        let d5 = dom(5, 2);
        let d = dataset(&[(0, 1), (1, 1), (2, 1)]);
        let min = CvMetaLearner::new(
            vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)],
            CvSelectionMode::Min,
        )
        .unwrap();
        assert_eq!(min.selection(d5, &d).unwrap(), 0);
        let max = CvMetaLearner::new(
            vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)],
            CvSelectionMode::Max,
        )
        .unwrap();
        assert_eq!(max.selection(d5, &d).unwrap(), 1);
    }

    #[test]
    fn cv_meta_ties_pick_lowest_index() {
        let d5 = dom(5, 2);
        let d = dataset(&[(0, 1), (1, 1)]);
        let same = CvMetaLearner::new(
            vec![Box::new(MajorityLearner), Box::new(MajorityLearner)],
            CvSelectionMode::Max,
        )
        .unwrap();
        assert_eq!(same.selection(d5, &d).unwrap(), 0);
    }

    #[test]
    fn registry_resolves_and_rejects() {
        let d5 = dom(5, 2);
        assert!(resolve_learner("majority", d5).is_ok());
        assert!(resolve_learner("constant:1", d5).is_ok());
        assert!(resolve_learner("cv:min:majority,anti-majority", d5).is_ok());
        assert!(matches!(
            resolve_learner("majorty", d5),
            Err(Error::UnknownLearner(_))
        ));
        assert!(resolve_learner("constant:7", d5).is_err());
    }

    #[test]
    fn learners_are_deterministic() {
        let d5 = dom(5, 2);
        let d = dataset(&[(0, 1), (3, 0), (1, 1)]);
        for name in [
            "majority",
            "anti-majority",
            "random",
            "constant:0",
            "cv:max:majority,anti-majority",
        ] {
            let l = resolve_learner(name, d5).unwrap();
            assert_eq!(l.train(d5, &d).unwrap(), l.train(d5, &d).unwrap());
        }
    }
}
