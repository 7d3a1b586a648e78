//! The combined rating: a weighted arithmetic mean on the strength scale,
//! mapped back to Elo points.
//!
//! ```text
//! C_λ(R) = 400 log10( Σ λ_i 10^(R_i/400) / Σ λ_i )
//! ```
//!
//! Evaluation is shifted by the largest active rating `m` (a log-sum-exp
//! shift), so ratings far outside the usual chess range neither overflow nor
//! lose the translation identity `C(R + δ) = C(R) + δ`. Coordinates with zero
//! weight drop out entirely.

use serde::{Deserialize, Serialize};

use crate::elo::{log10_400, pow10_400, EloRating, EloStrength};
use crate::error::{Error, Result};
use crate::profile::{Partition, RatingProfile, WeightVector};

/// Probe rating used by [`recover_weights`]; `q(400) = 10`.
pub const PROBE_RATING: f64 = 400.0;
/// Largest probe residual accepted by [`recover_weights`].
pub const PROBE_TOLERANCE: f64 = 1e-6;

/// Smallest and largest rating among coordinates with positive weight.
pub(crate) fn active_range(ratings: &[f64], weights: &[f64]) -> (f64, f64) {
    ratings
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&r, _)| {
            (lo.min(r), hi.max(r))
        })
}

/// `Σ λ_i 10^((R_i - shift)/400)` over active coordinates.
pub(crate) fn shifted_mass(ratings: &[f64], weights: &[f64], shift: f64) -> f64 {
    ratings
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&r, &w)| w * pow10_400(r - shift))
        .sum()
}

/// Combined rating on validated raw slices (equal lengths, some weight > 0).
///
/// The result is clamped to the active rating range, which the exact value
/// always lies in; this only absorbs last-bit rounding.
pub(crate) fn combine(ratings: &[f64], weights: &[f64]) -> f64 {
    let (lo, hi) = active_range(ratings, weights);
    let total: f64 = weights.iter().filter(|&&w| w > 0.0).sum();
    let mass = shifted_mass(ratings, weights, hi);
    (hi + log10_400(mass / total)).clamp(lo, hi)
}

fn check(profile: &RatingProfile, weights: &WeightVector) -> Result<()> {
    weights.ensure_len(profile.len())
}

/// Weighted mean strength `Σ λ_i q(R_i) / Σ λ_i`.
pub fn combined_strength(profile: &RatingProfile, weights: &WeightVector) -> Result<EloStrength> {
    check(profile, weights)?;
    let (r, w) = (profile.ratings(), weights.as_slice());
    let (_, hi) = active_range(r, w);
    let total: f64 = w.iter().filter(|&&x| x > 0.0).sum();
    let mean = pow10_400(hi) * (shifted_mass(r, w, hi) / total);
    EloStrength::new(mean).map_err(|_| {
        Error::NumericFailure(format!(
            "mean strength of a profile peaking at {hi} is not representable"
        ))
    })
}

/// The combined Elo rating `C_λ(R)`.
pub fn combined_rating(profile: &RatingProfile, weights: &WeightVector) -> Result<EloRating> {
    check(profile, weights)?;
    EloRating::new(combine(profile.ratings(), weights.as_slice()))
}

/// Aggregates each block with its inherited weights, then aggregates the
/// block ratings with block total weights, using the supplied rule kernel.
/// Blocks whose total weight is zero are skipped.
pub(crate) fn aggregate_in_blocks<F>(
    ratings: &[f64],
    weights: &[f64],
    partition: &Partition,
    rule: F,
) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let mut block_ratings = Vec::with_capacity(partition.blocks().len());
    let mut block_weights = Vec::with_capacity(partition.blocks().len());
    for block in partition.blocks() {
        let r: Vec<f64> = block.iter().map(|&i| ratings[i]).collect();
        let w: Vec<f64> = block.iter().map(|&i| weights[i]).collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            block_ratings.push(rule(&r, &w));
            block_weights.push(total);
        }
    }
    rule(&block_ratings, &block_weights)
}

/// Block-wise aggregation with the combined-rating rule. Equals
/// [`combined_rating`] up to rounding for every partition.
pub fn recursive_aggregate(
    profile: &RatingProfile,
    weights: &WeightVector,
    partition: &Partition,
) -> Result<EloRating> {
    check(profile, weights)?;
    if partition.n() != profile.len() {
        return Err(Error::Partition(format!(
            "partition covers {} indices but the profile has {}",
            partition.n(),
            profile.len()
        )));
    }
    EloRating::new(aggregate_in_blocks(
        profile.ratings(),
        weights.as_slice(),
        partition,
        combine,
    ))
}

/// Partial derivatives `∂C/∂R_j = λ_j q(R_j) / Σ λ_i q(R_i)`; they sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalWeights(Vec<f64>);

impl MarginalWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn marginal_weights(
    profile: &RatingProfile,
    weights: &WeightVector,
) -> Result<MarginalWeights> {
    check(profile, weights)?;
    let (r, w) = (profile.ratings(), weights.as_slice());
    let (_, hi) = active_range(r, w);
    let masses: Vec<f64> = r
        .iter()
        .zip(w)
        .map(|(&ri, &wi)| {
            if wi > 0.0 {
                wi * pow10_400(ri - hi)
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = masses.iter().sum();
    Ok(MarginalWeights(
        masses.into_iter().map(|m| m / total).collect(),
    ))
}

/// Recovers the normalized weights of an `n`-coordinate rule that is assumed
/// to be a strength average.
///
/// Coordinate `i` is probed with the profile that is zero everywhere except
/// `R_i = 400`; since `q(0) = 1`, the response strength is `1 + 9 w_i`. The
/// recovered weights must sum to one and must reproduce the rule on a few
/// extra validation profiles, otherwise the rule is rejected.
pub fn recover_weights<F>(n: usize, rule: F) -> Result<WeightVector>
where
    F: Fn(&RatingProfile) -> Result<f64>,
{
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot probe a rule over zero coordinates".into(),
        ));
    }
    let probe_gain = pow10_400(PROBE_RATING) - 1.0;
    let mut recovered = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = PROBE_RATING;
        let response = rule(&RatingProfile::from_ratings(r)?)?;
        recovered.push((pow10_400(response) - 1.0) / probe_gain);
    }

    let mut residual = (recovered.iter().sum::<f64>() - 1.0).abs();
    for &w in &recovered {
        residual = residual
            .max(-w)
            .max(if w.is_finite() { 0.0 } else { f64::INFINITY });
    }
    if residual > PROBE_TOLERANCE {
        return Err(Error::NotRepresentable { residual });
    }

    let clipped: Vec<f64> = recovered.iter().map(|w| w.max(0.0)).collect();
    let weights = WeightVector::new(clipped)?.normalized();

    for probe in validation_profiles(n) {
        let expected = combine(&probe, weights.as_slice());
        let observed = rule(&RatingProfile::from_ratings(probe)?)?;
        residual = residual.max((pow10_400(observed - expected) - 1.0).abs());
    }
    if residual > PROBE_TOLERANCE {
        return Err(Error::NotRepresentable { residual });
    }
    Ok(weights)
}

fn validation_profiles(n: usize) -> Vec<Vec<f64>> {
    vec![
        vec![0.0; n],
        (0..n)
            .map(|i| if i % 2 == 0 { 300.0 } else { -300.0 })
            .collect(),
        (0..n).map(|i| 2000.0 - 150.0 * i as f64).collect(),
    ]
}
