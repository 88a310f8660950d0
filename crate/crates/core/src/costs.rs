//! Loss functions, the cost functional, off-training-set cost, and the
//! expected empirical cost.

use std::collections::BTreeMap;

use num::Zero;

use crate::domain::{
    enumerate_training_sets, Dataset, FiniteDomain, SamplingDistribution, StochasticHypothesis,
    TargetFunction,
};
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::rational::{rat_one, rat_zero, Rational};

/// A loss table L(y_h, y_f) of nonnegative exact values, indexed by
/// predicted output then true output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossFunction {
    table: Vec<Vec<Rational>>,
}

impl LossFunction {
    pub fn new(table: Vec<Vec<Rational>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("empty loss table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidDistribution(format!(
                    "loss table is not square: row of length {} in a {}-row table",
                    row.len(),
                    n
                )));
            }
            if row.iter().any(|v| v < &rat_zero()) {
                return Err(Error::InvalidDistribution("negative loss entry".into()));
            }
        }
        Ok(Self { table })
    }

    pub fn y_size(&self) -> usize {
        self.table.len()
    }

    pub fn value(&self, y_h: usize, y_f: usize) -> &Rational {
        &self.table[y_h][y_f]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.table
    }
}

/// The zero-one loss: 0 on the diagonal, 1 elsewhere.
pub fn zero_one_loss(domain: FiniteDomain) -> LossFunction {
    let n = domain.y_size();
    let table = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if a == b { rat_zero() } else { rat_one() })
                .collect()
        })
        .collect();
    LossFunction { table }
}

/// The cyclic-shift loss L(y_h, y_f) = (y_f - y_h) mod |Y|. Every row is a
/// permutation of {0, .., |Y|-1}, so the loss is homogeneous; for |Y| > 2 it
/// is not symmetric in its arguments, which is what lets a pair of learners
/// have an asymmetric joint cost distribution while their marginals agree.
pub fn cyclic_loss(domain: FiniteDomain) -> LossFunction {
    let n = domain.y_size();
    let table = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| Rational::from(num::BigInt::from(((n + b - a) % n) as u64)))
                .collect()
        })
        .collect();
    LossFunction { table }
}

/// True iff for every cost value c the number of true outputs achieving
/// L(y_h, y_f) = c is the same for all predicted outputs y_h, i.e. every row
/// has the same multiset of values.
pub fn check_homogeneous(loss: &LossFunction) -> bool {
    let multiset = |row: &[Rational]| {
        let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
        for v in row {
            *counts.entry(v.clone()).or_insert(0) += 1;
        }
        counts
    };
    let first = multiset(&loss.table[0]);
    loss.table[1..].iter().all(|row| multiset(row) == first)
}

/// How queries are weighted inside the cost functional: either the
/// data-blind sampling distribution itself, or its off-training-set
/// restriction (zero mass on every trained input, renormalized).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryWeighting {
    DataBlind(SamplingDistribution),
    Ots(SamplingDistribution),
}

impl QueryWeighting {
    /// Normalized per-query weights for a concrete dataset.
    pub fn weights(&self, d: &Dataset) -> Result<Vec<Rational>> {
        match self {
            QueryWeighting::DataBlind(pi) => Ok(pi.weights().to_vec()),
            QueryWeighting::Ots(pi) => {
                let mut weights: Vec<Rational> = pi.weights().to_vec();
                for w in weights.iter_mut().enumerate().filter_map(|(x, w)| {
                    if d.contains_input(x) {
                        Some(w)
                    } else {
                        None
                    }
                }) {
                    *w = rat_zero();
                }
                let total: Rational = weights.iter().sum();
                if total.is_zero() {
                    return Err(Error::EmptyOts);
                }
                for w in &mut weights {
                    *w /= &total;
                }
                Ok(weights)
            }
        }
    }
}

/// The cost functional: normalized sum over queries of the query weight
/// times the expected loss of the hypothesis against f at that query.
pub fn generic_cost(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    w: &QueryWeighting,
    loss: &LossFunction,
) -> Result<Rational> {
    let weights = w.weights(d)?;
    let mut cost = rat_zero();
    for (q, wq) in weights.iter().enumerate() {
        if wq.is_zero() {
            continue;
        }
        cost += wq * &expected_loss_at(h, q, f.output(q), loss);
    }
    Ok(cost)
}

/// Expected loss of h's prediction at `q` against the true output `y_f`.
fn expected_loss_at(
    h: &StochasticHypothesis,
    q: usize,
    y_f: usize,
    loss: &LossFunction,
) -> Rational {
    h.row(q)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(y_h, p)| p * loss.value(y_h, y_f))
        .sum()
}

/// Off-training-set cost: the cost functional restricted and renormalized to
/// queries outside d_X. With uniform pi, a deterministic hypothesis, and
/// zero-one loss this is the fraction of off-training-set points where h
/// disagrees with f.
pub fn ots_cost(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
) -> Result<Rational> {
    generic_cost(f, h, d, &QueryWeighting::Ots(pi.clone()), loss)
}

/// Exact distribution of the off-training-set cost when each query's
/// prediction is drawn independently from the hypothesis's row. For a
/// deterministic hypothesis this is a point mass at `ots_cost`; in general
/// its expectation equals `ots_cost`.
pub fn ots_cost_distribution(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
) -> Result<CostDistribution> {
    let weights = QueryWeighting::Ots(pi.clone()).weights(d)?;
    let mut dist = CostDistribution::new();
    dist.add(rat_zero(), rat_one());
    for (q, wq) in weights.iter().enumerate() {
        if wq.is_zero() {
            continue;
        }
        let mut next = CostDistribution::new();
        for (cost, p) in dist.atoms() {
            for (y_h, py) in h.row(q).iter().enumerate() {
                if py.is_zero() {
                    continue;
                }
                next.add(cost + wq * loss.value(y_h, f.output(q)), p * py);
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// On-training-set average loss of a single hypothesis on a single dataset:
/// duplicate inputs count with multiplicity, normalized by the total pi mass
/// of the (multi)set of training inputs.
pub fn on_training_cost(
    f: &TargetFunction,
    h: &StochasticHypothesis,
    d: &Dataset,
    pi: &SamplingDistribution,
    loss: &LossFunction,
) -> Result<Rational> {
    let mut num = rat_zero();
    let mut den = rat_zero();
    for &(x, _) in d.pairs() {
        let wq = pi.weight(x);
        num += wq * &expected_loss_at(h, x, f.output(x), loss);
        den += wq;
    }
    if den.is_zero() {
        return Err(Error::InvalidDistribution(
            "all training inputs have zero sampling mass".into(),
        ));
    }
    Ok(num / den)
}

/// The f-conditioned expected empirical cost: the expectation over all
/// training sets of size m of the learner's on-training-set average loss.
pub fn empirical_cost(
    f: &TargetFunction,
    learner: &dyn Learner,
    m: usize,
    pi: &SamplingDistribution,
    loss: &LossFunction,
    replacement: bool,
) -> Result<Rational> {
    let mut total = rat_zero();
    for d in enumerate_training_sets(f, m, pi, replacement)? {
        let h = learner.train(f.domain(), &d)?;
        total += d.weight() * &on_training_cost(f, &h, &d, pi, loss)?;
    }
    Ok(total)
}

/// An exact, finitely-supported distribution over cost values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CostDistribution {
    atoms: BTreeMap<Rational, Rational>,
}

impl CostDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, cost: Rational, probability: Rational) {
        if probability.is_zero() {
            return;
        }
        *self.atoms.entry(cost).or_insert_with(rat_zero) += probability;
    }

    /// Mix another distribution in with the given weight.
    pub fn add_scaled(&mut self, other: &CostDistribution, scale: &Rational) {
        for (cost, p) in &other.atoms {
            self.add(cost.clone(), p * scale);
        }
    }

    pub fn atoms(&self) -> &BTreeMap<Rational, Rational> {
        &self.atoms
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    pub fn expectation(&self) -> Rational {
        self.atoms.iter().map(|(c, p)| c * p).sum()
    }

    /// First atom where the two distributions disagree, if any: the cost
    /// value together with both probabilities (a missing atom reads as 0).
    pub fn first_discrepancy(
        &self,
        other: &CostDistribution,
    ) -> Option<(Rational, Rational, Rational)> {
        let costs: std::collections::BTreeSet<&Rational> =
            self.atoms.keys().chain(other.atoms.keys()).collect();
        for cost in costs {
            let a = self.atoms.get(cost).cloned().unwrap_or_else(rat_zero);
            let b = other.atoms.get(cost).cloned().unwrap_or_else(rat_zero);
            if a != b {
                return Some((cost.clone(), a, b));
            }
        }
        None
    }
}
