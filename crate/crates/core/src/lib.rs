//! Exact-arithmetic verification laboratory for no-free-lunch identities in
//! supervised learning and regret guarantees in learning under expert
//! advice.
//!
//! Everything probabilistic is enumerated exhaustively on small finite
//! domains and computed in arbitrary-precision rationals; equality checks
//! are exact, never floating-point. Monte Carlo appears only where a claim
//! is about a continuous family (random priors) or an asymptotic regime
//! (law-of-large-numbers convergence), and is clearly reported as such.

pub mod costs;
pub mod domain;
pub mod error;
pub mod learners;
pub mod nfl;
pub mod olea;
pub mod rational;
pub mod textio;

pub use costs::{
    check_homogeneous, cyclic_loss, empirical_cost, generic_cost, on_training_cost, ots_cost,
    ots_cost_distribution, zero_one_loss, CostDistribution, LossFunction, QueryWeighting,
};
pub use domain::{
    enumerate_functions, enumerate_functions_capped, enumerate_training_sets,
    posterior_over_functions, sample_random_prior, Dataset, FiniteDomain, Prior,
    SamplingDistribution, StochasticHypothesis, TargetFunction, DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result};
pub use learners::{
    loo_cv_error, resolve_learner, AntiMajorityLearner, ConstantLearner, CvMetaLearner,
    CvSelectionMode, Learner, MajorityLearner, RandomGuessLearner,
};
pub use nfl::{
    cost_distribution_given_f, expected_cost_given_d, joint_head_to_head,
    lln_convergence_experiment, nfl_f_average_check, nfl_uniform_prior_check,
    ots_vs_empirical_table, phi_sum_constant, prior_average_check, prior_witness_search,
    ConditionalTable, EmptyOtsPolicy, EngineConfig, HeadToHeadReport, JointCostDistribution,
    LlnReport, NflReport, PriorAverageReport, PriorWitness,
};
pub use olea::{
    embed_to_supervised, embedding_cost_equivalence, ewa_strategy, ftl_strategy, gap_exhaustive,
    leaderboard, GapRow, LeaderBoard, PayoffSequence, StrategyTrace, SupervisedEmbedding,
};
pub use rational::{format_rational, parse_rational, Rational};
