//! Named aggregation rules that the axiom checkers can evaluate side by side.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aggregation::combine;
use crate::alternatives::{arithmetic_mean, power_mean};
use crate::elo::{log10_400, pow10_400, EloRating};
use crate::error::{Error, Result};
use crate::profile::{RatingProfile, WeightVector};

/// Default entropy strength for [`AggregationRule::Entropy`].
pub const DEFAULT_ETA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum AggregationRule {
    /// Strength-scale weighted mean (the combined rating).
    Main,
    /// Weighted mean of the ratings themselves.
    Arithmetic,
    /// Strength mean for `n ≤ 2`, rating-scale mean for `n ≥ 3`.
    Piecewise,
    /// `q⁻¹(Σ w_i q(R_i) + η H(w))` with `H` the natural-log Shannon entropy
    /// of the normalized weights.
    Entropy { eta: f64 },
    /// `400 log10` of the weighted `p`-th power mean of strengths.
    PowerMean { p: f64 },
}

impl AggregationRule {
    pub fn entropy(eta: f64) -> Result<Self> {
        let rule = Self::Entropy { eta };
        rule.validate()?;
        Ok(rule)
    }

    pub fn power_mean(p: f64) -> Result<Self> {
        let rule = Self::PowerMean { p };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Entropy { eta } if !(eta.is_finite() && eta > 0.0) => Err(
                Error::InvalidParameter(format!("entropy strength η = {eta} must be positive")),
            ),
            Self::PowerMean { p } if !p.is_finite() => Err(Error::InvalidParameter(format!(
                "power-mean exponent {p} is not finite"
            ))),
            _ => Ok(()),
        }
    }

    /// Evaluates the rule on a validated profile and weight vector.
    pub fn evaluate(&self, profile: &RatingProfile, weights: &WeightVector) -> Result<EloRating> {
        self.validate()?;
        weights.ensure_len(profile.len())?;
        let value = self.eval_raw(profile.ratings(), weights.as_slice());
        EloRating::new(value)
            .map_err(|_| Error::NumericFailure(format!("{self} produced a non-finite rating")))
    }

    /// Fixes the weights, giving a function of the profile alone.
    pub fn bind(self, weights: WeightVector) -> impl Fn(&RatingProfile) -> Result<f64> {
        move |p| self.evaluate(p, &weights).map(f64::from)
    }

    /// Raw kernel; inputs must already be validated.
    pub(crate) fn eval_raw(&self, ratings: &[f64], weights: &[f64]) -> f64 {
        match *self {
            Self::Main => combine(ratings, weights),
            Self::Arithmetic => arithmetic_mean(ratings, weights),
            Self::Piecewise if ratings.len() <= 2 => combine(ratings, weights),
            Self::Piecewise => arithmetic_mean(ratings, weights),
            Self::Entropy { eta } => entropy_shifted(ratings, weights, eta),
            Self::PowerMean { p } => power_mean(ratings, weights, p),
        }
    }
}

impl fmt::Display for AggregationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Main => write!(f, "main"),
            Self::Arithmetic => write!(f, "arithmetic"),
            Self::Piecewise => write!(f, "piecewise"),
            Self::Entropy { eta } => write!(f, "entropy(eta={eta})"),
            Self::PowerMean { p } => write!(f, "power-mean(p={p})"),
        }
    }
}

fn entropy_shifted(ratings: &[f64], weights: &[f64], eta: f64) -> f64 {
    let total: f64 = weights.iter().sum();
    let mut strength = 0.0;
    let mut entropy = 0.0;
    for (&r, &l) in ratings.iter().zip(weights) {
        if l > 0.0 {
            let w = l / total;
            strength += w * pow10_400(r);
            entropy -= w * w.ln();
        }
    }
    log10_400(strength + eta * entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(r: &[f64]) -> RatingProfile {
        RatingProfile::from_ratings(r.to_vec()).unwrap()
    }

    #[test]
    fn piecewise_three_coordinates_is_rating_mean() {
        let c = AggregationRule::Piecewise
            .evaluate(
                &profile(&[0.0, 400.0, 400.0]),
                &WeightVector::equal(3).unwrap(),
            )
            .unwrap();
        assert!((c.value() - 800.0 / 3.0).abs() < 1e-12);
        let c2 = AggregationRule::Piecewise
            .evaluate(&profile(&[0.0, 400.0]), &WeightVector::equal(2).unwrap())
            .unwrap();
        assert!((c2.value() - 296.145_075_797_697_5).abs() < 1e-9);
    }

    #[test]
    fn entropy_lifts_uniform_profiles() {
        let rule = AggregationRule::entropy(1.0).unwrap();
        let c = rule
            .evaluate(&profile(&[0.0, 0.0]), &WeightVector::equal(2).unwrap())
            .unwrap();
        // 400 log10(1 + ln 2), 40-digit reference
        assert!((c.value() - 91.477_884_702_940_05).abs() < 1e-9);
        for r in [-500.0, 1200.0, 2800.0] {
            let c = rule
                .evaluate(
                    &profile(&[r, r, r]),
                    &WeightVector::new(vec![1.0, 2.0, 3.0]).unwrap(),
                )
                .unwrap();
            assert!(c.value() > r);
        }
        let single = rule
            .evaluate(&profile(&[1500.0]), &WeightVector::equal(1).unwrap())
            .unwrap();
        assert!((single.value() - 1500.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            AggregationRule::entropy(0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(AggregationRule::entropy(-1.0).is_err());
        assert!(AggregationRule::power_mean(f64::NAN).is_err());
        let bad = AggregationRule::Entropy { eta: -2.0 };
        assert!(bad
            .evaluate(&profile(&[0.0]), &WeightVector::equal(1).unwrap())
            .is_err());
    }

    #[test]
    fn main_rule_is_combined_rating() {
        let p = profile(&[2840.0, 2832.0, 2869.0]);
        let w = WeightVector::equal(3).unwrap();
        let c = AggregationRule::Main.evaluate(&p, &w).unwrap();
        assert_eq!(
            c.value(),
            crate::aggregation::combined_rating(&p, &w).unwrap().value()
        );
    }

    #[test]
    fn serde_tags() {
        let json = serde_json::to_string(&AggregationRule::Entropy { eta: 1.0 }).unwrap();
        assert_eq!(json, r#"{"id":"entropy","eta":1.0}"#);
        let back: AggregationRule = serde_json::from_str(r#"{"id":"power_mean","p":2.0}"#).unwrap();
        assert_eq!(back, AggregationRule::PowerMean { p: 2.0 });
    }
}
