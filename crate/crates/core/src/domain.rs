//! Finite input/output spaces, target functions, hypotheses, datasets,
//! priors, and exact enumeration of each.
//!
//! All types are immutable values after construction and all operations are
//! pure, so streams can be partitioned across workers and recombined by exact
//! summation with bit-identical results.

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{rat_one, rat_zero, Rational};

/// Default cap on the number of enumerated target functions (2^20).
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// Denominator grid used when quantizing sampled prior weights to exact
/// rationals (2^32).
pub const PRIOR_QUANTIZATION_DENOMINATOR: u64 = 1 << 32;

/// A finite input space X and output space Y, with inputs indexed
/// `0..x_size` and outputs `0..y_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteDomain {
    x_size: usize,
    y_size: usize,
}

impl FiniteDomain {
    pub fn new(x_size: usize, y_size: usize) -> Result<Self> {
        if x_size < 1 {
            return Err(Error::InvalidDomain(format!(
                "|X| must be at least 1, got {x_size}"
            )));
        }
        if y_size < 2 {
            return Err(Error::InvalidDomain(format!(
                "|Y| must be at least 2, got {y_size}"
            )));
        }
        Ok(Self { x_size, y_size })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn is_binary(&self) -> bool {
        self.y_size == 2
    }

    /// Number of single-valued functions X -> Y, or None on overflow.
    pub fn function_count(&self) -> Option<u128> {
        let mut count: u128 = 1;
        for _ in 0..self.x_size {
            count = count.checked_mul(self.y_size as u128)?;
        }
        Some(count)
    }
}

/// A single-valued target function f: X -> Y, the delta special case of a
/// target distribution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetFunction {
    domain: FiniteDomain,
    outputs: Vec<usize>,
}

impl TargetFunction {
    pub fn new(domain: FiniteDomain, outputs: Vec<usize>) -> Result<Self> {
        if outputs.len() != domain.x_size() {
            return Err(Error::InvalidDomain(format!(
                "function table has {} entries for |X| = {}",
                outputs.len(),
                domain.x_size()
            )));
        }
        if let Some(&bad) = outputs.iter().find(|&&y| y >= domain.y_size()) {
            return Err(Error::InvalidDomain(format!(
                "output index {bad} out of range for |Y| = {}",
                domain.y_size()
            )));
        }
        Ok(Self { domain, outputs })
    }

    pub fn constant(domain: FiniteDomain, y: usize) -> Result<Self> {
        Self::new(domain, vec![y; domain.x_size()])
    }

    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn output(&self, x: usize) -> usize {
        self.outputs[x]
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Pointwise binary complement; only meaningful for |Y| = 2.
    pub fn complement(&self) -> Result<Self> {
        if !self.domain.is_binary() {
            return Err(Error::NonBinaryOutput {
                learner: "complement".into(),
                y_size: self.domain.y_size(),
            });
        }
        Self::new(self.domain, self.outputs.iter().map(|y| 1 - y).collect())
    }

    /// True iff f(x) = y for every training pair (x, y) in `d`.
    pub fn consistent_with(&self, d: &Dataset) -> bool {
        d.pairs().iter().all(|&(x, y)| self.outputs[x] == y)
    }
}

/// A hypothesis distribution h(y | x): for each input, an exact distribution
/// over outputs. Deterministic hypotheses are the delta special case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticHypothesis {
    domain: FiniteDomain,
    per_query: Vec<Vec<Rational>>,
}

impl StochasticHypothesis {
    pub fn new(domain: FiniteDomain, per_query: Vec<Vec<Rational>>) -> Result<Self> {
        if per_query.len() != domain.x_size() {
            return Err(Error::InvalidDistribution(format!(
                "hypothesis has {} per-query rows for |X| = {}",
                per_query.len(),
                domain.x_size()
            )));
        }
        for (x, dist) in per_query.iter().enumerate() {
            if dist.len() != domain.y_size() {
                return Err(Error::InvalidDistribution(format!(
                    "row {x} has {} entries for |Y| = {}",
                    dist.len(),
                    domain.y_size()
                )));
            }
            if dist.iter().any(|p| p < &rat_zero()) {
                return Err(Error::InvalidDistribution(format!(
                    "row {x} has a negative probability"
                )));
            }
            let total: Rational = dist.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidDistribution(format!(
                    "row {x} sums to {total}, not 1"
                )));
            }
        }
        Ok(Self { domain, per_query })
    }

    /// Delta hypothesis that reproduces a target function exactly.
    pub fn delta(f: &TargetFunction) -> Self {
        let domain = f.domain();
        let per_query = f
            .outputs()
            .iter()
            .map(|&y| {
                let mut row = vec![rat_zero(); domain.y_size()];
                row[y] = rat_one();
                row
            })
            .collect();
        Self { domain, per_query }
    }

    pub fn delta_outputs(domain: FiniteDomain, outputs: Vec<usize>) -> Result<Self> {
        Ok(Self::delta(&TargetFunction::new(domain, outputs)?))
    }

    /// The uniform-random hypothesis: every query gets the flat distribution
    /// over Y.
    pub fn uniform(domain: FiniteDomain) -> Self {
        let p = Rational::new(BigInt::one(), BigInt::from(domain.y_size() as u64));
        Self {
            domain,
            per_query: vec![vec![p; domain.y_size()]; domain.x_size()],
        }
    }

    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn probability(&self, x: usize, y: usize) -> &Rational {
        &self.per_query[x][y]
    }

    pub fn row(&self, x: usize) -> &[Rational] {
        &self.per_query[x]
    }

    /// If the row at `x` is a delta, the output it selects.
    pub fn deterministic_output(&self, x: usize) -> Option<usize> {
        let mut hit = None;
        for (y, p) in self.per_query[x].iter().enumerate() {
            if p.is_one() {
                hit = Some(y);
            } else if !p.is_zero() {
                return None;
            }
        }
        hit
    }

    /// Exact convex mixture of two hypotheses: `w * a + (1 - w) * b`.
    pub fn mix(a: &Self, b: &Self, w: &Rational) -> Result<Self> {
        if a.domain != b.domain {
            return Err(Error::InvalidDomain(
                "mixing hypotheses over different domains".into(),
            ));
        }
        let cw = rat_one() - w;
        let per_query = a
            .per_query
            .iter()
            .zip(&b.per_query)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(pa, pb)| w * pa + &cw * pb)
                    .collect()
            })
            .collect();
        Self::new(a.domain, per_query)
    }
}

/// An ordered training set d = (d_X, d_Y) with its generation probability.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dataset {
    pairs: Vec<(usize, usize)>,
    weight: Rational,
}

impl Dataset {
    pub fn new(pairs: Vec<(usize, usize)>, weight: Rational) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::DatasetTooSmall { m: 0, required: 1 });
        }
        if weight <= rat_zero() || weight > rat_one() {
            return Err(Error::InvalidDistribution(format!(
                "dataset weight {weight} outside (0, 1]"
            )));
        }
        Ok(Self { pairs, weight })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// Distinct training inputs, in increasing order.
    pub fn distinct_inputs(&self) -> Vec<usize> {
        let mut xs: Vec<usize> = self.pairs.iter().map(|&(x, _)| x).collect();
        xs.sort_unstable();
        xs.dedup();
        xs
    }

    pub fn contains_input(&self, x: usize) -> bool {
        self.pairs.iter().any(|&(px, _)| px == x)
    }

    /// The label most recently paired with `x`, if any (latest pair wins).
    pub fn latest_label(&self, x: usize) -> Option<usize> {
        self.pairs
            .iter()
            .rev()
            .find(|&&(px, _)| px == x)
            .map(|&(_, y)| y)
    }

    /// Dataset with pair `i` removed; the weight is kept as-is (it is
    /// irrelevant to leave-one-out training).
    pub fn without_pair(&self, i: usize) -> Result<Self> {
        if self.pairs.len() < 2 {
            return Err(Error::DatasetTooSmall {
                m: self.pairs.len(),
                required: 2,
            });
        }
        let mut pairs = self.pairs.clone();
        pairs.remove(i);
        Ok(Self {
            pairs,
            weight: self.weight.clone(),
        })
    }
}

/// An exact distribution over a (possibly sparse) set of target functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prior {
    support: Vec<TargetFunction>,
    weights: Vec<Rational>,
}

impl Prior {
    pub fn new(support: Vec<TargetFunction>, weights: Vec<Rational>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support functions but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| w < &rat_zero()) {
            return Err(Error::InvalidDistribution("negative prior weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "prior weights sum to {total}, not 1"
            )));
        }
        for i in 1..support.len() {
            if support[..i].contains(&support[i]) {
                return Err(Error::InvalidDistribution(
                    "prior support contains a duplicate function".into(),
                ));
            }
        }
        Ok(Self { support, weights })
    }

    /// Uniform prior over an explicit support set.
    pub fn uniform(support: Vec<TargetFunction>) -> Result<Self> {
        let n = support.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("empty prior support".into()));
        }
        let w = Rational::new(BigInt::one(), BigInt::from(n as u64));
        Self::new(support, vec![w; n])
    }

    /// Uniform prior over every function on the domain.
    pub fn uniform_over_all(domain: FiniteDomain, cap: u128) -> Result<Self> {
        let support: Vec<_> = enumerate_functions_capped(domain, cap)?.collect();
        Self::uniform(support)
    }

    /// All mass on a single function (a vertex of the simplex).
    pub fn delta(f: TargetFunction) -> Self {
        Self {
            support: vec![f],
            weights: vec![rat_one()],
        }
    }

    pub fn support(&self) -> &[TargetFunction] {
        &self.support
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TargetFunction, &Rational)> {
        self.support.iter().zip(self.weights.iter())
    }
}

/// An exact sampling distribution pi(x) over inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingDistribution {
    weights: Vec<Rational>,
}

impl SamplingDistribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution(
                "empty sampling distribution".into(),
            ));
        }
        if weights.iter().any(|w| w < &rat_zero()) {
            return Err(Error::InvalidDistribution(
                "negative sampling probability".into(),
            ));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "sampling weights sum to {total}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(x_size: usize) -> Self {
        let w = Rational::new(BigInt::one(), BigInt::from(x_size as u64));
        Self {
            weights: vec![w; x_size],
        }
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn x_size(&self) -> usize {
        self.weights.len()
    }

    /// Inputs with strictly positive sampling mass.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(x, _)| x)
            .collect()
    }
}

/// Lexicographic stream of every single-valued function on the domain.
///
/// Yields exactly `y_size^x_size` functions; errors up front if that count
/// exceeds `cap`.
pub fn enumerate_functions(domain: FiniteDomain) -> Result<impl Iterator<Item = TargetFunction>> {
    enumerate_functions_capped(domain, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_functions_capped(
    domain: FiniteDomain,
    cap: u128,
) -> Result<impl Iterator<Item = TargetFunction>> {
    let count = domain.function_count().ok_or(Error::BudgetExceeded {
        count: u128::MAX,
        cap,
    })?;
    if count > cap {
        return Err(Error::BudgetExceeded { count, cap });
    }
    Ok(FunctionIter {
        domain,
        next: Some(vec![0; domain.x_size()]),
    })
}

struct FunctionIter {
    domain: FiniteDomain,
    next: Option<Vec<usize>>,
}

impl Iterator for FunctionIter {
    type Item = TargetFunction;

    fn next(&mut self) -> Option<Self::Item> {
        let outputs = self.next.take()?;
        let item = TargetFunction {
            domain: self.domain,
            outputs: outputs.clone(),
        };
        // Lexicographic increment with the last input as the fastest digit.
        let mut digits = outputs;
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if digits[i] + 1 < self.domain.y_size() {
                digits[i] += 1;
                for d in digits.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                self.next = Some(digits);
                break;
            }
        }
        Some(item)
    }
}

/// Every ordered training set of size `m` with nonzero generation
/// probability under the noise-free vertical likelihood, in lexicographic
/// order of `d_X`.
///
/// With replacement the weight of a sequence is the product of the sampling
/// probabilities. Without replacement only distinct-input sequences appear
/// and the product weights are renormalized to sum to 1.
pub fn enumerate_training_sets(
    f: &TargetFunction,
    m: usize,
    pi: &SamplingDistribution,
    replacement: bool,
) -> Result<Vec<Dataset>> {
    if m < 1 {
        return Err(Error::DatasetTooSmall { m, required: 1 });
    }
    let x_size = f.domain().x_size();
    if pi.x_size() != x_size {
        return Err(Error::InvalidDistribution(format!(
            "sampling distribution covers {} inputs, domain has {}",
            pi.x_size(),
            x_size
        )));
    }
    let support = pi.support();
    if !replacement && m > support.len() {
        return Err(Error::NoReplacementTooLong {
            m,
            x_size: support.len(),
        });
    }

    let mut out = Vec::new();
    let mut sequence = Vec::with_capacity(m);
    collect_sequences(&support, m, replacement, pi, &mut sequence, &mut out);

    let datasets: Vec<Dataset> = if replacement {
        out.into_iter()
            .map(|(xs, w)| make_dataset(f, xs, w))
            .collect()
    } else {
        let total: Rational = out.iter().map(|(_, w)| w).sum();
        out.into_iter()
            .map(|(xs, w)| make_dataset(f, xs, w / &total))
            .collect()
    };
    Ok(datasets)
}

fn make_dataset(f: &TargetFunction, xs: Vec<usize>, weight: Rational) -> Dataset {
    let pairs = xs.into_iter().map(|x| (x, f.output(x))).collect();
    Dataset { pairs, weight }
}

fn collect_sequences(
    support: &[usize],
    m: usize,
    replacement: bool,
    pi: &SamplingDistribution,
    prefix: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Rational)>,
) {
    if prefix.len() == m {
        let weight: Rational = prefix.iter().map(|&x| pi.weight(x)).product();
        out.push((prefix.clone(), weight));
        return;
    }
    for &x in support {
        if !replacement && prefix.contains(&x) {
            continue;
        }
        prefix.push(x);
        collect_sequences(support, m, replacement, pi, prefix, out);
        prefix.pop();
    }
}

/// Bayes update of a prior under the noise-free vertical likelihood:
/// restrict to the functions consistent with `d` and renormalize exactly.
pub fn posterior_over_functions(prior: &Prior, d: &Dataset) -> Result<Prior> {
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (f, w) in prior.iter() {
        if f.consistent_with(d) {
            support.push(f.clone());
            weights.push(w.clone());
        }
    }
    let total: Rational = weights.iter().sum();
    if support.is_empty() || total.is_zero() {
        return Err(Error::NoConsistentFunction);
    }
    let weights = weights.into_iter().map(|w| w / &total).collect();
    Prior::new(support, weights)
}

/// A prior drawn from the flat (Dirichlet-all-ones) distribution over the
/// simplex of all functions on the domain.
///
/// The raw draw uses the standard exponential-spacings construction on a
/// seeded ChaCha8 stream; each coordinate is then quantized to the
/// 2^32 grid and the quantized weights are renormalized exactly, so the
/// result is a legal exact prior and the same seed always reproduces it.
pub fn sample_random_prior(domain: FiniteDomain, seed: u64) -> Result<Prior> {
    sample_random_prior_capped(domain, seed, DEFAULT_ENUMERATION_CAP)
}

pub fn sample_random_prior_capped(domain: FiniteDomain, seed: u64, cap: u128) -> Result<Prior> {
    let support: Vec<TargetFunction> = enumerate_functions_capped(domain, cap)?.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..support.len())
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = raw.iter().sum();

    let den = BigInt::from(PRIOR_QUANTIZATION_DENOMINATOR);
    let mut weights: Vec<Rational> = raw
        .iter()
        .map(|w| {
            let ticks = ((w / total) * PRIOR_QUANTIZATION_DENOMINATOR as f64).round() as u64;
            Rational::new(BigInt::from(ticks), den.clone())
        })
        .collect();
    let quantized_total: Rational = weights.iter().sum();
    if quantized_total.is_zero() {
        // Cannot happen for nonempty support; ticks sum to ~2^32.
        return Err(Error::InvalidDistribution(
            "quantized prior collapsed to zero".into(),
        ));
    }
    for w in &mut weights {
        *w /= &quantized_total;
    }
    Prior::new(support, weights)
}
