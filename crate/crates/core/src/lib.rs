//! Combine several Elo ratings (for example classical, rapid and blitz) into
//! one rating that still lives on the Elo scale.
//!
//! The combined rating converts each coordinate to its strength
//! `10^(R_i/400)`, takes the weighted arithmetic mean of strengths and
//! converts back:
//!
//! ```
//! use combined_elo::{combined_rating, RatingProfile, WeightVector};
//!
//! let carlsen = RatingProfile::new(vec!["classical", "rapid", "blitz"], vec![2840.0, 2832.0, 2869.0])?;
//! let c = combined_rating(&carlsen, &WeightVector::equal(3)?)?;
//! assert!((c.value() - 2847.74).abs() < 0.01);
//! # Ok::<(), combined_elo::Error>(())
//! ```
//!
//! Around that rule the crate provides the induced pairwise probabilities,
//! random-format lotteries, power-mean alternatives, role-specific updates
//! and seeded numerical checks of the aggregation axioms.

pub mod aggregation;
pub mod alternatives;
pub mod elo;
pub mod error;
pub mod io;
pub mod probability;
pub mod profile;
pub mod roles;
pub mod rules;
pub mod verification;

pub use aggregation::{
    combined_rating, combined_strength, marginal_weights, recover_weights, recursive_aggregate,
    MarginalWeights,
};
pub use alternatives::{arithmetic_rating, marginal_ratio, power_mean_rating, PowerMeanParameter};
pub use elo::{
    elo_odds, elo_rating_from_strength, elo_strength, expected_score, EloRating, EloStrength,
};
pub use error::{Error, Result};
pub use probability::{
    decompose_combined_probability, endogenous_weights, lottery_probability, pairwise_probability,
    pooling_rating, MatchupReport,
};
pub use profile::{normalize_weights, Distribution, Partition, RatingProfile, WeightVector};
pub use roles::{role_display_rating, role_expected_score, role_update, GameResult, RoleProfile};
pub use rules::AggregationRule;
pub use verification::{check_axioms, verify_cycle, AxiomReport, SampleSpec};
