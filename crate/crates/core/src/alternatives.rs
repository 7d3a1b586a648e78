//! Other scalar summaries: the rating-scale weighted mean and power means of
//! strengths. Both are recursively consistent but, apart from the power mean
//! with `p = 1`, give the wrong marginal ratio at equal weights.

use serde::{Deserialize, Serialize};

use crate::aggregation::active_range;
use crate::elo::{EloRating, LN10_OVER_400};
use crate::error::{Error, Result};
use crate::profile::{RatingProfile, WeightVector};
use crate::rules::AggregationRule;

/// Stencil half-width for [`marginal_ratio`], in Elo points.
pub const MARGINAL_STEP: f64 = 0.5;

/// Exponent of a power mean of strengths; `0` is the geometric-mean limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerMeanParameter(f64);

impl PowerMeanParameter {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParameter(format!(
                "power-mean exponent {p} is not finite"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PowerMeanParameter {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PowerMeanParameter> for f64 {
    fn from(p: PowerMeanParameter) -> f64 {
        p.0
    }
}

pub(crate) fn arithmetic_mean(ratings: &[f64], weights: &[f64]) -> f64 {
    let (lo, hi) = active_range(ratings, weights);
    let total: f64 = weights.iter().sum();
    let sum: f64 = ratings.iter().zip(weights).map(|(r, w)| r * w).sum();
    (sum / total).clamp(lo, hi)
}

/// `400 log10 G_p(q(R))`, evaluated around the extreme rating `M` that keeps
/// every exponent `p(R_i - M)` non-positive:
///
/// ```text
/// M + ln(1 + Σ λ_i expm1(p c (R_i - M)) / Σλ) / (p c),   c = ln10 / 400
/// ```
///
/// `expm1`/`ln_1p` keep full precision as `p → 0`.
pub(crate) fn power_mean(ratings: &[f64], weights: &[f64], p: f64) -> f64 {
    if p == 0.0 {
        return arithmetic_mean(ratings, weights);
    }
    let (lo, hi) = active_range(ratings, weights);
    let anchor = if p > 0.0 { hi } else { lo };
    let pc = p * LN10_OVER_400;
    let total: f64 = weights.iter().filter(|&&w| w > 0.0).sum();
    let excess: f64 = ratings
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&r, &w)| w * (pc * (r - anchor)).exp_m1())
        .sum();
    (anchor + (excess / total).ln_1p() / pc).clamp(lo, hi)
}

/// Weighted mean of ratings `Σ α_i R_i / Σ α_i`.
pub fn arithmetic_rating(profile: &RatingProfile, weights: &WeightVector) -> Result<EloRating> {
    weights.ensure_len(profile.len())?;
    EloRating::new(arithmetic_mean(profile.ratings(), weights.as_slice()))
}

pub fn power_mean_rating(
    profile: &RatingProfile,
    weights: &WeightVector,
    p: PowerMeanParameter,
) -> Result<EloRating> {
    weights.ensure_len(profile.len())?;
    EloRating::new(power_mean(profile.ratings(), weights.as_slice(), p.0))
}

/// Five-point central difference of `f` along coordinate `j`.
pub(crate) fn partial<F>(f: F, point: &[f64], j: usize, h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = point.to_vec();
    let mut at = |d: f64| {
        x[j] = point[j] + d;
        f(&x)
    };
    let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
    (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
}

/// Ratio `∂_x C / ∂_y C` of the rule at `(x, y)` with two equal weights,
/// by central finite differences.
pub fn marginal_ratio(rule: &AggregationRule, x: f64, y: f64) -> Result<f64> {
    rule.validate()?;
    EloRating::new(x)?;
    EloRating::new(y)?;
    let weights = [1.0, 1.0];
    let f = |r: &[f64]| rule.eval_raw(r, &weights);
    let dx = partial(f, &[x, y], 0, MARGINAL_STEP);
    let dy = partial(f, &[x, y], 1, MARGINAL_STEP);
    // differences smaller than this are rounding noise in C itself
    let noise = 64.0 * f64::EPSILON * f(&[x, y]).abs().max(1.0) / MARGINAL_STEP;
    if !(dx.is_finite() && dy.is_finite() && dx > noise && dy > noise) {
        return Err(Error::NumericFailure(format!(
            "{rule} has non-positive or undefined partials ({dx}, {dy}) at ({x}, {y})"
        )));
    }
    Ok(dx / dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::combined_rating;
    use crate::elo::pow10_400;

    fn profile(r: &[f64]) -> RatingProfile {
        RatingProfile::from_ratings(r.to_vec()).unwrap()
    }

    fn p(x: f64) -> PowerMeanParameter {
        PowerMeanParameter::new(x).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let eq = WeightVector::equal(3).unwrap();
        assert_eq!(
            arithmetic_rating(&profile(&[1999.0; 3]), &eq)
                .unwrap()
                .value(),
            1999.0
        );
        let eq2 = WeightVector::equal(2).unwrap();
        assert_eq!(
            arithmetic_rating(&profile(&[0.0, 400.0]), &eq2)
                .unwrap()
                .value(),
            200.0
        );
    }

    #[test]
    fn small_p_approaches_geometric_mean() {
        let prof = profile(&[2840.0, 2832.0, 2869.0]);
        let w = WeightVector::new(vec![1.0, 2.0, 0.5]).unwrap();
        // geometric mean of strengths: 10^(Σ α_i R_i / 400) mapped back to ratings
        let alpha = w.normalized();
        let log_geo: f64 = prof
            .ratings()
            .iter()
            .zip(alpha.as_slice())
            .map(|(r, a)| a * r / 400.0)
            .sum();
        let geometric = 400.0 * log_geo;
        let near_zero = power_mean_rating(&prof, &w, p(1e-8)).unwrap().value();
        assert!((near_zero - geometric).abs() < 1e-4);
        assert!((arithmetic_rating(&prof, &w).unwrap().value() - geometric).abs() < 1e-9);
    }

    #[test]
    fn power_mean_examples() {
        let prof = profile(&[0.0, 400.0]);
        let eq = WeightVector::equal(2).unwrap();
        let g2 = power_mean_rating(&prof, &eq, p(2.0)).unwrap().value();
        let direct = 400.0 * (101.0f64 / 2.0).sqrt().log10();
        assert!((g2 - direct).abs() < 1e-9);
        assert!((g2 - 340.658_275_623_732_3).abs() < 1e-9);
        let g1 = power_mean_rating(&prof, &eq, p(1.0)).unwrap().value();
        assert!((g1 - combined_rating(&prof, &eq).unwrap().value()).abs() < 1e-9);
        let g0 = power_mean_rating(&prof, &eq, p(0.0)).unwrap().value();
        assert_eq!(g0, 200.0);
        let gm = power_mean_rating(&prof, &eq, p(-1.0)).unwrap().value();
        // harmonic mean of strengths 1 and 10
        assert!((gm - 400.0 * (2.0f64 / 1.1).log10()).abs() < 1e-9);
    }

    #[test]
    fn extreme_exponents_stay_internal() {
        let prof = profile(&[1500.0, 2500.0, 2100.0]);
        let eq = WeightVector::equal(3).unwrap();
        let hi = power_mean_rating(&prof, &eq, p(500.0)).unwrap().value();
        let lo = power_mean_rating(&prof, &eq, p(-500.0)).unwrap().value();
        assert!(hi <= 2500.0 && hi > 2499.0);
        assert!(lo >= 1500.0 && lo < 1501.0);
    }

    #[test]
    fn marginal_ratio_examples() {
        let main = AggregationRule::Main;
        assert!((marginal_ratio(&main, 2000.0, 2000.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((marginal_ratio(&main, 2400.0, 2000.0).unwrap() / 10.0 - 1.0).abs() < 1e-6);
        let arith = AggregationRule::Arithmetic;
        assert!((marginal_ratio(&arith, 2400.0, 2000.0).unwrap() - 1.0).abs() < 1e-9);
        for pv in [-1.5, 0.5, 2.0, 3.0] {
            let rule = AggregationRule::PowerMean { p: pv };
            let got = marginal_ratio(&rule, 2300.0, 2100.0).unwrap();
            let want = pow10_400(pv * 200.0);
            assert!((got / want - 1.0).abs() < 1e-5, "p={pv}: {got} vs {want}");
        }
    }

    #[test]
    fn marginal_ratio_errors() {
        assert!(marginal_ratio(&AggregationRule::Main, f64::NAN, 0.0).is_err());
        // partial of the lower coordinate is lost in rounding
        assert!(matches!(
            marginal_ratio(&AggregationRule::Main, 40_000.0, 0.0),
            Err(Error::NumericFailure(_))
        ));
    }
}
