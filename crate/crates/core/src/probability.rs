//! Pairwise probabilities induced by per-format ratings.
//!
//! Two different objects live here. The combined-rating probability averages
//! strengths first and then applies the Elo formula, which gives a
//! Bradley-Terry form with pooled masses `λ_i q(R_i)`. The random-format
//! lottery first picks a format with exogenous probabilities `π_i` and then
//! averages the per-format expected scores. The combined probability can be
//! written as a lottery too, but with matchup-dependent (endogenous) weights.

use serde::{Deserialize, Serialize};

use crate::aggregation::{active_range, combine, shifted_mass};
use crate::elo::{log10_400, logistic, pow10_400, EloRating};
use crate::error::{Error, Result};
use crate::profile::{Distribution, RatingProfile, WeightVector};

fn check(a: &RatingProfile, b: &RatingProfile, n: usize) -> Result<()> {
    a.ensure_same_len(n)?;
    b.ensure_same_len(n)
}

/// Largest active rating across both players; shared shift for pooled masses.
fn pooled_shift(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    active_range(a, w).1.max(active_range(b, w).1)
}

/// `Σλ q(R_i) / (Σλ q(R_i) + Σλ q(S_i))`.
pub fn pairwise_probability(
    r: &RatingProfile,
    s: &RatingProfile,
    weights: &WeightVector,
) -> Result<f64> {
    check(r, s, weights.len())?;
    let w = weights.as_slice();
    let shift = pooled_shift(r.ratings(), s.ratings(), w);
    let mr = shifted_mass(r.ratings(), w, shift);
    let ms = shifted_mass(s.ratings(), w, shift);
    Ok(mr / (mr + ms))
}

/// Per-format expected scores `p_i = E(R_i, S_i)`.
pub fn per_format_scores(r: &RatingProfile, s: &RatingProfile) -> Result<Vec<f64>> {
    check(r, s, r.len())?;
    Ok(r.ratings()
        .iter()
        .zip(s.ratings())
        .map(|(&a, &b)| logistic(a, b))
        .collect())
}

/// Random-format expected score `Σ π_i p_i(R, S)`.
pub fn lottery_probability(
    r: &RatingProfile,
    s: &RatingProfile,
    formats: &Distribution,
) -> Result<f64> {
    check(r, s, formats.len())?;
    Ok(per_format_scores(r, s)?
        .iter()
        .zip(formats.as_slice())
        .map(|(p, pi)| p * pi)
        .sum())
}

/// Matchup weights `w_i ∝ λ_i (q(R_i) + q(S_i))`, summing to one.
pub fn endogenous_weights(
    r: &RatingProfile,
    s: &RatingProfile,
    weights: &WeightVector,
) -> Result<Vec<f64>> {
    check(r, s, weights.len())?;
    let w = weights.as_slice();
    let shift = pooled_shift(r.ratings(), s.ratings(), w);
    let masses: Vec<f64> = r
        .ratings()
        .iter()
        .zip(s.ratings())
        .zip(w)
        .map(|((&a, &b), &l)| {
            if l > 0.0 {
                l * (pow10_400(a - shift) + pow10_400(b - shift))
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = masses.iter().sum();
    Ok(masses.into_iter().map(|m| m / total).collect())
}

/// The combined probability rewritten as a mixture of per-format scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub scores: Vec<f64>,
    /// `Σ w_i p_i`
    pub probability: f64,
}

pub fn decompose_combined_probability(
    r: &RatingProfile,
    s: &RatingProfile,
    weights: &WeightVector,
) -> Result<Decomposition> {
    let w = endogenous_weights(r, s, weights)?;
    let p = per_format_scores(r, s)?;
    let probability = w.iter().zip(&p).map(|(a, b)| a * b).sum();
    Ok(Decomposition {
        weights: w,
        scores: p,
        probability,
    })
}

/// Member of the pooling family `400 log10(Σ λ_i q(R_i)) + K`.
///
/// `K = -400 log10(Σ λ_i)` is the normalized member and equals the combined
/// rating.
pub fn pooling_rating(
    profile: &RatingProfile,
    weights: &WeightVector,
    offset: f64,
) -> Result<EloRating> {
    weights.ensure_len(profile.len())?;
    if !offset.is_finite() {
        return Err(Error::InvalidInput(format!(
            "offset {offset} is not finite"
        )));
    }
    let (r, w) = (profile.ratings(), weights.as_slice());
    let (_, hi) = active_range(r, w);
    EloRating::new(hi + log10_400(shifted_mass(r, w, hi)) + offset)
}

/// Offset that turns [`pooling_rating`] into the combined rating.
pub fn normalizing_offset(weights: &WeightVector) -> f64 {
    -log10_400(weights.total())
}

/// Every probability object for one matchup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchupReport {
    pub profile_a: RatingProfile,
    pub profile_b: RatingProfile,
    pub weights: WeightVector,
    pub combined_a: f64,
    pub combined_b: f64,
    pub per_format_scores: Vec<f64>,
    pub combined_probability: f64,
    /// Present when a format distribution was supplied.
    pub lottery_probability: Option<f64>,
    pub endogenous_weights: Vec<f64>,
}

impl MatchupReport {
    pub fn new(
        a: &RatingProfile,
        b: &RatingProfile,
        weights: &WeightVector,
        formats: Option<&Distribution>,
    ) -> Result<Self> {
        check(a, b, weights.len())?;
        let combined_a = combine(a.ratings(), weights.as_slice());
        let combined_b = combine(b.ratings(), weights.as_slice());
        let lottery_probability = formats
            .map(|pi| lottery_probability(a, b, pi))
            .transpose()?;
        Ok(Self {
            profile_a: a.clone(),
            profile_b: b.clone(),
            weights: weights.clone(),
            combined_a,
            combined_b,
            per_format_scores: per_format_scores(a, b)?,
            combined_probability: pairwise_probability(a, b, weights)?,
            lottery_probability,
            endogenous_weights: endogenous_weights(a, b, weights)?,
        })
    }

    pub fn rating_difference(&self) -> f64 {
        self.combined_a - self.combined_b
    }

    /// Combined-rating probability minus lottery probability.
    pub fn gap(&self) -> Option<f64> {
        self.lottery_probability
            .map(|l| self.combined_probability - l)
    }
}
