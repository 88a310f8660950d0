//! Monte Carlo and exhaustive oracles for the engine-level claims that are
//! not pure rational identities.

use num::One;

use freelunch_core::costs::zero_one_loss;
use freelunch_core::domain::{
    enumerate_functions, sample_random_prior, FiniteDomain, SamplingDistribution,
    StochasticHypothesis, TargetFunction,
};
use freelunch_core::learners::{AntiMajorityLearner, Learner, MajorityLearner};
use freelunch_core::nfl::{lln_convergence_experiment, prior_average_check, EngineConfig};
use freelunch_core::olea::{embed_to_supervised, PayoffSequence};
use freelunch_core::rational::{ratio, to_f64, Rational};

/// The flat distribution over the simplex has the uniform prior as its mean;
/// the sampled, quantized priors must reproduce that to Monte Carlo accuracy.
#[test]
fn sampled_priors_average_to_the_uniform_prior() {
    let domain = FiniteDomain::new(2, 2).unwrap();
    let n_samples = 10_000u64;
    let mut sums = vec![0.0f64; 4];
    for seed in 0..n_samples {
        let prior = sample_random_prior(domain, seed).unwrap();
        let total: Rational = prior.weights().iter().sum();
        assert!(total.is_one());
        for (i, w) in prior.weights().iter().enumerate() {
            sums[i] += to_f64(w);
        }
    }
    for sum in sums {
        let mean = sum / n_samples as f64;
        assert!(
            (mean - 0.25).abs() < 0.05,
            "coordinate mean {mean} strays from 1/4"
        );
    }
}

#[test]
fn monte_carlo_prior_average_concentrates_at_one_half() {
    let domain = FiniteDomain::new(4, 2).unwrap();
    let pi = SamplingDistribution::uniform(4);
    let loss = zero_one_loss(domain);
    let learners: Vec<Box<dyn Learner>> =
        vec![Box::new(MajorityLearner), Box::new(AntiMajorityLearner)];
    let report = prior_average_check(
        &learners,
        domain,
        1,
        &pi,
        &loss,
        1000,
        42,
        &EngineConfig::default(),
    )
    .unwrap();
    assert!(report.exact_equal);
    assert_eq!(report.exact_values[0].1, ratio(1, 2));
    for sample in &report.samples {
        assert!(
            (sample.mean - 0.5).abs() < 0.02,
            "{} mean {} strays from 1/2",
            sample.learner,
            sample.mean
        );
    }
}

#[test]
fn lln_gap_is_within_three_standard_errors() {
    let domain = FiniteDomain::new(100, 2).unwrap();
    // Constant hypothesis wrong on 30 of 100 inputs.
    let f_outputs: Vec<usize> = (0..100).map(|x| usize::from(x < 30)).collect();
    let f = TargetFunction::new(domain, f_outputs).unwrap();
    let h = StochasticHypothesis::delta(&TargetFunction::constant(domain, 0).unwrap());
    let pi = SamplingDistribution::uniform(100);
    let loss = zero_one_loss(domain);
    for seed in [1, 2, 3] {
        let report = lln_convergence_experiment(&h, &f, 10, &pi, &loss, 5000, seed).unwrap();
        assert_eq!(report.exact_cost, ratio(3, 10));
        assert!(
            report.within(3.0),
            "seed {seed}: gap {} vs stderr {}",
            report.gap,
            report.std_error
        );
    }
}

/// Uniform-f average of the next-step cost is exactly 1/2 for any strategy
/// that picks its prediction from the considered functions.
#[test]
fn embedded_next_step_cost_averages_to_one_half() {
    let m = 3;
    // Arbitrary fixed considered functions over the 4-point window.
    let considered = [[0usize, 1, 0, 1], [1, 1, 0, 0]];
    let domain = FiniteDomain::new(m + 1, 2).unwrap();
    let mut total = Rational::new(0.into(), 1.into());
    let mut count = 0u64;
    for f in enumerate_functions(domain).unwrap() {
        // Payoffs on the training window come from agreement with f.
        let sequences: Vec<PayoffSequence> = considered
            .iter()
            .map(|g| PayoffSequence::new((0..=m).map(|x| g[x] == f.output(x)).collect()))
            .collect();
        // FTL's pick for the query step is the leader after m iterations.
        let board = freelunch_core::olea::leaderboard(&sequences, m).unwrap();
        let prediction = considered[board.leader(m)][m];
        let (cost, payoff) =
            freelunch_core::olea::embedding_cost_equivalence(f.output(m), prediction);
        assert_eq!(payoff == 1, cost == Rational::new(0.into(), 1.into()));
        total += cost;
        count += 1;
    }
    assert_eq!(total / Rational::new(count.into(), 1.into()), ratio(1, 2));
}

/// Round trip: the supervised cost at the query equals the complement of the
/// followed sequence's next payoff.
#[test]
fn embedding_round_trip_matches_ftl_payoff() {
    let m = 4;
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next_bit = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 60) & 1 == 1
    };
    for _ in 0..1000 {
        let sequences: Vec<PayoffSequence> = (0..2)
            .map(|_| PayoffSequence::new((0..=m).map(|_| next_bit()).collect()))
            .collect();
        let d_y: Vec<usize> = (0..m).map(|_| usize::from(next_bit())).collect();
        let f_next = usize::from(next_bit());

        let embedding = embed_to_supervised(&sequences, &d_y, m).unwrap();
        // Give each considered function the query value that realizes its
        // recorded next payoff against f_next.
        let board = freelunch_core::olea::leaderboard(&sequences, m).unwrap();
        let choice = board.leader(m);
        let g_next = if sequences[choice].payoff(m) {
            f_next
        } else {
            1 - f_next
        };
        let g = embedding.considered_function(choice, g_next).unwrap();
        let (cost, _) = freelunch_core::olea::embedding_cost_equivalence(
            f_next,
            g.output(embedding.query_index()),
        );
        let expected = if sequences[choice].payoff(m) {
            Rational::new(0.into(), 1.into())
        } else {
            Rational::new(1.into(), 1.into())
        };
        assert_eq!(cost, expected);
    }
}
