//! Payoff sequences, follow-the-leader and weighted forecasters, regret
//! accounting, exhaustive gap-guarantee tables, and the embedding of the
//! expert-advice game into supervised learning.
//!
//! "Infinite" sequences are always length-n prefixes; the horizon n is a
//! parameter everywhere.

use num::{One, Zero};
use rayon::prelude::*;

use crate::domain::{Dataset, FiniteDomain, TargetFunction};
use crate::error::{Error, Result};
use crate::rational::{rat_one, rat_zero, Rational};

/// A binary payoff stream v_k(i), i = 1..n (stored 0-indexed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffSequence {
    bits: Vec<bool>,
}

impl PayoffSequence {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_u8(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("payoff value {other} is not a bit"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Parses a line of '0'/'1' characters.
    pub fn parse(line: &str) -> Result<Self> {
        line.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("unexpected character {other:?} in payoff sequence"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn render(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Payoff at iteration `i` (0-indexed).
    pub fn payoff(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Exact prefix sums, leaders, and laggards for a set of payoff sequences.
#[derive(Debug, Clone)]
pub struct LeaderBoard {
    /// accumulated[i][k] = pi_k(i); row 0 is all zeros.
    accumulated: Vec<Vec<u64>>,
    leaders: Vec<usize>,
    laggards: Vec<usize>,
}

impl LeaderBoard {
    /// Accumulated payoff of sequence `k` after `i` iterations.
    pub fn total(&self, k: usize, i: usize) -> u64 {
        self.accumulated[i][k]
    }

    /// Leading sequence after `i` iterations (lowest index on ties).
    pub fn leader(&self, i: usize) -> usize {
        self.leaders[i]
    }

    /// Trailing sequence after `i` iterations (lowest index on ties).
    pub fn laggard(&self, i: usize) -> usize {
        self.laggards[i]
    }

    pub fn horizon(&self) -> usize {
        self.leaders.len() - 1
    }
}

/// Prefix sums and argmax/argmin tracking for every i <= n.
pub fn leaderboard(sequences: &[PayoffSequence], n: usize) -> Result<LeaderBoard> {
    if n == 0 {
        return Err(Error::EmptyHorizon);
    }
    if sequences.is_empty() {
        return Err(Error::TooFewSequences {
            got: 0,
            required: 1,
        });
    }
    for (k, s) in sequences.iter().enumerate() {
        if s.len() < n {
            return Err(Error::SequenceTooShort {
                index: k,
                len: s.len(),
                required: n,
            });
        }
    }
    let k_count = sequences.len();
    let mut accumulated = Vec::with_capacity(n + 1);
    let mut leaders = Vec::with_capacity(n + 1);
    let mut laggards = Vec::with_capacity(n + 1);
    let mut totals = vec![0u64; k_count];
    accumulated.push(totals.clone());
    leaders.push(0);
    laggards.push(0);
    for i in 0..n {
        for (k, s) in sequences.iter().enumerate() {
            if s.payoff(i) {
                totals[k] += 1;
            }
        }
        let leader = argmax(&totals);
        let laggard = argmin(&totals);
        accumulated.push(totals.clone());
        leaders.push(leader);
        laggards.push(laggard);
    }
    Ok(LeaderBoard {
        accumulated,
        leaders,
        laggards,
    })
}

fn argmax(totals: &[u64]) -> usize {
    let mut best = 0;
    for (k, &v) in totals.iter().enumerate().skip(1) {
        if v > totals[best] {
            best = k;
        }
    }
    best
}

fn argmin(totals: &[u64]) -> usize {
    let mut best = 0;
    for (k, &v) in totals.iter().enumerate().skip(1) {
        if v < totals[best] {
            best = k;
        }
    }
    best
}

/// A meta-strategy's per-iteration choices, realized payoffs, and regret
/// against the best single sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyTrace {
    pub choices: Vec<usize>,
    pub payoffs: Vec<bool>,
    /// regret[i] = pi_{k+(i+1)}(i+1) - accumulated strategy payoff.
    pub regret: Vec<i64>,
}

impl StrategyTrace {
    pub fn final_regret(&self) -> i64 {
        *self.regret.last().unwrap()
    }

    pub fn max_running_regret(&self) -> i64 {
        *self.regret.iter().max().unwrap()
    }

    pub fn total_payoff(&self) -> u64 {
        self.payoffs.iter().filter(|&&p| p).count() as u64
    }
}

fn trace_from_choices(
    sequences: &[PayoffSequence],
    board: &LeaderBoard,
    n: usize,
    choices: Vec<usize>,
) -> StrategyTrace {
    let mut payoffs = Vec::with_capacity(n);
    let mut regret = Vec::with_capacity(n);
    let mut sum: i64 = 0;
    for (i, &c) in choices.iter().enumerate() {
        let p = sequences[c].payoff(i);
        if p {
            sum += 1;
        }
        payoffs.push(p);
        let best = board.total(board.leader(i + 1), i + 1) as i64;
        regret.push(best - sum);
    }
    StrategyTrace {
        choices,
        payoffs,
        regret,
    }
}

/// Follow-the-leader: at each iteration pick the sequence whose accumulated
/// payoff over the previous iterations is highest (empty history and ties
/// go to index 0).
pub fn ftl_strategy(sequences: &[PayoffSequence], n: usize) -> Result<StrategyTrace> {
    let board = leaderboard(sequences, n)?;
    let choices: Vec<usize> = (0..n).map(|i| board.leader(i)).collect();
    Ok(trace_from_choices(sequences, &board, n, choices))
}

/// Deterministic weighted-vote forecaster: each sequence carries weight
/// (1 + eta)^{pi_k(i-1)}, computed as an exact rational power, and the
/// strategy follows the argmax weight (lowest index on ties).
pub fn ewa_strategy(
    sequences: &[PayoffSequence],
    n: usize,
    eta: &Rational,
) -> Result<StrategyTrace> {
    if eta <= &rat_zero() {
        return Err(Error::InvalidDistribution(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let board = leaderboard(sequences, n)?;
    let base = rat_one() + eta;
    let choices: Vec<usize> = (0..n)
        .map(|i| {
            let weights: Vec<Rational> = (0..sequences.len())
                .map(|k| rational_pow(&base, board.total(k, i)))
                .collect();
            let mut best = 0;
            for (k, w) in weights.iter().enumerate().skip(1) {
                if w > &weights[best] {
                    best = k;
                }
            }
            best
        })
        .collect();
    Ok(trace_from_choices(sequences, &board, n, choices))
}

fn rational_pow(base: &Rational, exp: u64) -> Rational {
    let mut out = rat_one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            out *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    out
}

/// One row of the exhaustive gap table for K = 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    /// pi_{k+}(n) - pi_{k-}(n) at the horizon.
    pub gap: usize,
    pub max_final_regret: i64,
    pub max_running_regret: i64,
    pub pairs: u64,
}

/// Maximum budgeted horizon for the exhaustive pair enumeration (4^n pairs).
pub const GAP_EXHAUSTIVE_MAX_N: usize = 14;

/// Enumerates all 4^n pairs of binary sequences of length n, runs
/// follow-the-leader on each, and reports per-gap maxima of the final and
/// running regret.
pub fn gap_exhaustive(n: usize) -> Result<Vec<GapRow>> {
    if n == 0 {
        return Err(Error::EmptyHorizon);
    }
    if n > GAP_EXHAUSTIVE_MAX_N {
        return Err(Error::BudgetExceeded {
            count: 1u128 << (2 * n),
            cap: 1u128 << (2 * GAP_EXHAUSTIVE_MAX_N),
        });
    }
    let count = 1u32 << n;
    #[derive(Clone)]
    struct Acc {
        max_final: Vec<i64>,
        max_running: Vec<i64>,
        pairs: Vec<u64>,
    }
    let empty = || Acc {
        max_final: vec![i64::MIN; n + 1],
        max_running: vec![i64::MIN; n + 1],
        pairs: vec![0; n + 1],
    };
    // Per-gap maxima combine by max and counts by sum, so the partitioning
    // across workers cannot affect the result.
    let acc = (0..count)
        .into_par_iter()
        .map(|a| {
            let mut acc = empty();
            for b in 0..count {
                let (gap, final_regret, running_regret) = ftl_pair_stats(a, b, n);
                acc.pairs[gap] += 1;
                acc.max_final[gap] = acc.max_final[gap].max(final_regret);
                acc.max_running[gap] = acc.max_running[gap].max(running_regret);
            }
            acc
        })
        .reduce(empty, |mut x, y| {
            for g in 0..=n {
                x.pairs[g] += y.pairs[g];
                x.max_final[g] = x.max_final[g].max(y.max_final[g]);
                x.max_running[g] = x.max_running[g].max(y.max_running[g]);
            }
            x
        });

    Ok((0..=n)
        .filter(|&g| acc.pairs[g] > 0)
        .map(|g| GapRow {
            gap: g,
            max_final_regret: acc.max_final[g],
            max_running_regret: acc.max_running[g],
            pairs: acc.pairs[g],
        })
        .collect())
}

/// Follow-the-leader over one bitmask pair: (final gap, final regret,
/// max running regret).
fn ftl_pair_stats(a: u32, b: u32, n: usize) -> (usize, i64, i64) {
    let mut pi_a: i64 = 0;
    let mut pi_b: i64 = 0;
    let mut sum: i64 = 0;
    let mut max_running = i64::MIN;
    for i in 0..n {
        let va = (a >> i) & 1;
        let vb = (b >> i) & 1;
        // Leader over the previous i iterations; ties go to the first.
        let pick_a = pi_a >= pi_b;
        sum += if pick_a { va as i64 } else { vb as i64 };
        pi_a += va as i64;
        pi_b += vb as i64;
        let regret = pi_a.max(pi_b) - sum;
        max_running = max_running.max(regret);
    }
    let gap = (pi_a - pi_b).unsigned_abs() as usize;
    (gap, pi_a.max(pi_b) - sum, max_running)
}

/// The expert-advice game recast as supervised learning on a finite window:
/// inputs 0..m are the training iterations, input m is the next query, and
/// each payoff sequence induces a considered function g_k with
/// g_k(x) = d_Y(x) iff v_k(x) = 1 on the training window.
#[derive(Debug, Clone)]
pub struct SupervisedEmbedding {
    domain: FiniteDomain,
    training_outputs: Vec<Vec<usize>>,
    dataset: Dataset,
    query_index: usize,
}

impl SupervisedEmbedding {
    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// The query input, one past the training window.
    pub fn query_index(&self) -> usize {
        self.query_index
    }

    pub fn considered_count(&self) -> usize {
        self.training_outputs.len()
    }

    /// Training-window outputs of the k-th considered function.
    pub fn training_window(&self, k: usize) -> &[usize] {
        &self.training_outputs[k]
    }

    /// The k-th considered function with an explicit choice for its value at
    /// the query (both values are legal; the training data never pins it).
    pub fn considered_function(&self, k: usize, value_at_query: usize) -> Result<TargetFunction> {
        let mut outputs = self.training_outputs[k].clone();
        outputs.push(value_at_query);
        TargetFunction::new(self.domain, outputs)
    }
}

/// Builds the supervised view of the first m iterations of the game.
pub fn embed_to_supervised(
    sequences: &[PayoffSequence],
    d_y: &[usize],
    m: usize,
) -> Result<SupervisedEmbedding> {
    if m == 0 {
        return Err(Error::EmptyHorizon);
    }
    if d_y.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("label sequence has {} entries for m = {m}", d_y.len()),
        });
    }
    if let Some(&bad) = d_y.iter().find(|&&y| y > 1) {
        return Err(Error::NonBinaryOutput {
            learner: "embed_to_supervised".into(),
            y_size: bad + 1,
        });
    }
    if sequences.is_empty() {
        return Err(Error::TooFewSequences {
            got: 0,
            required: 1,
        });
    }
    for (k, s) in sequences.iter().enumerate() {
        if s.len() < m + 1 {
            return Err(Error::SequenceTooShort {
                index: k,
                len: s.len(),
                required: m + 1,
            });
        }
    }
    let domain = FiniteDomain::new(m + 1, 2)?;
    let training_outputs = sequences
        .iter()
        .map(|s| {
            (0..m)
                .map(|x| if s.payoff(x) { d_y[x] } else { 1 - d_y[x] })
                .collect()
        })
        .collect();
    let pairs = (0..m).map(|x| (x, d_y[x])).collect();
    let dataset = Dataset::new(pairs, rat_one())?;
    Ok(SupervisedEmbedding {
        domain,
        training_outputs,
        dataset,
        query_index: m,
    })
}

/// Next-step cost/payoff duality of the embedding: the supervised cost is
/// 1 - [h = f] at the query and the game payoff is its complement.
pub fn embedding_cost_equivalence(f_next: usize, h_next: usize) -> (Rational, usize) {
    let cost = if h_next == f_next {
        rat_zero()
    } else {
        rat_one()
    };
    let payoff = if cost.is_zero() { 1 } else { 0 };
    debug_assert!((cost.is_zero() && payoff == 1) || (cost.is_one() && payoff == 0));
    (cost, payoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn seqs(strs: &[&str]) -> Vec<PayoffSequence> {
        strs.iter()
            .map(|s| PayoffSequence::parse(s).unwrap())
            .collect()
    }

    #[test]
    fn prefix_sums_and_leaders() {
        let s = seqs(&["101"]);
        let board = leaderboard(&s, 3).unwrap();
        assert_eq!(
            (1..=3).map(|i| board.total(0, i)).collect::<Vec<_>>(),
            vec![1, 1, 2]
        );

        let s = seqs(&["11", "00"]);
        let board = leaderboard(&s, 2).unwrap();
        assert_eq!(board.leader(2), 0);
        assert_eq!(board.laggard(2), 1);

        let s = seqs(&["1010", "1010", "1010"]);
        let board = leaderboard(&s, 4).unwrap();
        for i in 0..=4 {
            assert_eq!(board.leader(i), 0);
        }
    }

    #[test]
    fn leaderboard_rejects_bad_inputs() {
        assert!(matches!(
            leaderboard(&seqs(&["1"]), 0),
            Err(Error::EmptyHorizon)
        ));
        assert!(leaderboard(&[], 1).is_err());
        assert!(matches!(
            leaderboard(&seqs(&["1", "10"]), 2),
            Err(Error::SequenceTooShort { index: 0, .. })
        ));
    }

    #[test]
    fn ftl_zero_regret_on_leading_first_sequence() {
        let s = seqs(&["11111", "00000"]);
        let trace = ftl_strategy(&s, 5).unwrap();
        assert!(trace.choices.iter().all(|&c| c == 0));
        assert!(trace.regret.iter().all(|&r| r == 0));
    }

    #[test]
    fn ftl_one_initial_mistake_when_second_sequence_leads() {
        let s = seqs(&["00000", "11111"]);
        let trace = ftl_strategy(&s, 5).unwrap();
        assert_eq!(trace.choices[0], 0);
        assert!(trace.choices[1..].iter().all(|&c| c == 1));
        assert!(trace.regret.iter().all(|&r| r == 1));
    }

    #[test]
    fn ftl_single_sequence_has_zero_regret() {
        let s = seqs(&["10110"]);
        let trace = ftl_strategy(&s, 5).unwrap();
        assert_eq!(trace.total_payoff(), 3);
        assert!(trace.regret.iter().all(|&r| r == 0));
    }

    #[test]
    fn ewa_matches_ftl_choices() {
        // The weight (1+eta)^pi is monotone in pi, so the argmax-weight
        // rule and follow-the-leader coincide under the same tie-breaking.
        let s = seqs(&["1010101010", "0101010101"]);
        let ftl = ftl_strategy(&s, 10).unwrap();
        let ewa = ewa_strategy(&s, 10, &ratio(1, 1)).unwrap();
        assert_eq!(ewa.choices, ftl.choices);
        assert!(ewa.final_regret() <= ftl.final_regret());

        let identical = seqs(&["1100", "1100"]);
        let trace = ewa_strategy(&identical, 4, &ratio(1, 2)).unwrap();
        assert!(trace.regret.iter().all(|&r| r == 0));

        let huge = ewa_strategy(&s, 10, &ratio(1000, 1)).unwrap();
        assert_eq!(huge.choices, ftl.choices);
    }

    #[test]
    fn ewa_rejects_nonpositive_eta() {
        let s = seqs(&["10", "01"]);
        assert!(ewa_strategy(&s, 2, &rat_zero()).is_err());
    }

    #[test]
    fn regret_is_nonnegative_and_slowly_growing() {
        // Exhaustive over all pairs at a small horizon.
        let n = 6;
        for a in 0..1u32 << n {
            for b in 0..1u32 << n {
                let sa = PayoffSequence::new((0..n).map(|i| (a >> i) & 1 == 1).collect());
                let sb = PayoffSequence::new((0..n).map(|i| (b >> i) & 1 == 1).collect());
                let trace = ftl_strategy(&[sa, sb], n).unwrap();
                let mut prev = 0i64;
                for &r in &trace.regret {
                    assert!(r >= 0);
                    assert!(r - prev <= 1);
                    prev = r;
                }
            }
        }
    }

    #[test]
    fn gap_table_extremes() {
        let n = 8;
        let rows = gap_exhaustive(n).unwrap();
        let row = |g: usize| rows.iter().find(|r| r.gap == g).unwrap();

        // Maximal gap: only an all-1/all-0 pair can reach it, and the sole
        // regret comes from the initial tie-break.
        let full = row(n);
        assert_eq!(full.pairs, 2);
        assert!(full.max_running_regret <= 1);

        // gap = n - 2: the idealized bound of 2 plus the tie-break allowance.
        assert!(row(n - 2).max_running_regret <= 3);

        let total: u64 = rows.iter().map(|r| r.pairs).sum();
        assert_eq!(total, 1 << (2 * n));
    }

    #[test]
    fn gap_table_single_iteration() {
        let rows = gap_exhaustive(1).unwrap();
        for row in &rows {
            assert!(row.max_running_regret <= 1);
        }
    }

    #[test]
    fn gap_rejects_oversized_horizon() {
        assert!(matches!(
            gap_exhaustive(GAP_EXHAUSTIVE_MAX_N + 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn embedding_iff_rule() {
        let all1 = seqs(&["1111"]);
        let e = embed_to_supervised(&all1, &[0, 1, 0], 3).unwrap();
        assert_eq!(e.training_window(0), &[0, 1, 0]);

        let all0 = seqs(&["0000"]);
        let e = embed_to_supervised(&all0, &[0, 1, 0], 3).unwrap();
        assert_eq!(e.training_window(0), &[1, 0, 1]);

        let mixed = seqs(&["1010"]);
        let e = embed_to_supervised(&mixed, &[0, 1, 0], 3).unwrap();
        assert_eq!(e.training_window(0), &[0, 0, 0]);
    }

    #[test]
    fn embedding_soundness_property() {
        let s = seqs(&["1011", "0010"]);
        let d_y = [1, 0, 1];
        let e = embed_to_supervised(&s, &d_y, 3).unwrap();
        for (k, seq) in s.iter().enumerate() {
            for (x, &label) in d_y.iter().enumerate() {
                assert_eq!(seq.payoff(x), e.training_window(k)[x] == label);
            }
        }
        assert!(e.considered_function(0, 1).is_ok());
    }

    #[test]
    fn embedding_rejects_non_binary_labels() {
        let s = seqs(&["111"]);
        assert!(embed_to_supervised(&s, &[0, 2], 2).is_err());
    }

    #[test]
    fn cost_payoff_duality() {
        assert_eq!(embedding_cost_equivalence(1, 1), (rat_zero(), 1));
        assert_eq!(embedding_cost_equivalence(0, 1), (rat_one(), 0));
    }
}
