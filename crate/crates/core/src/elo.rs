//! Scalar Elo primitives.
//!
//! A rating `r` corresponds to the strength `q(r) = 10^(r/400)`. Every power
//! of ten in this crate goes through [`LN10_OVER_400`] so that strengths, odds
//! and expected scores agree with one another to the last bit.
//!
//! The expected score is evaluated in logistic form and saturates instead of
//! overflowing. In double precision the favourite's score rounds to exactly 1
//! once the rating gap exceeds about 6400 points; the underdog's score stays
//! positive until the gap passes about 123 000 points and then becomes 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ln(10) / 400`: natural-log growth of strength per Elo point.
pub const LN10_OVER_400: f64 = std::f64::consts::LN_10 / 400.0;

/// A finite rating on the Elo scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EloRating(f64);

impl EloRating {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidInput(format!("rating {value} is not finite")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn strength(self) -> EloStrength {
        elo_strength(self)
    }
}

impl TryFrom<f64> for EloRating {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<EloRating> for f64 {
    fn from(r: EloRating) -> f64 {
        r.0
    }
}

impl fmt::Display for EloRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A strictly positive, finite Elo strength `q(r)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EloStrength(f64);

impl EloStrength {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidInput(format!(
                "strength {value} must be finite and positive"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn rating(self) -> EloRating {
        elo_rating_from_strength(self)
    }
}

impl TryFrom<f64> for EloStrength {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<EloStrength> for f64 {
    fn from(s: EloStrength) -> f64 {
        s.0
    }
}

/// `10^(x/400)` for a raw rating-scale quantity.
#[inline]
pub(crate) fn pow10_400(x: f64) -> f64 {
    (x * LN10_OVER_400).exp()
}

/// `400 log10(s)` for a raw positive strength-scale quantity.
#[inline]
pub(crate) fn log10_400(s: f64) -> f64 {
    s.ln() / LN10_OVER_400
}

/// Logistic expected score on raw ratings.
#[inline]
pub(crate) fn logistic(a: f64, b: f64) -> f64 {
    1.0 / (1.0 + pow10_400(b - a))
}

/// Elo strength `q(r) = 10^(r/400)`.
///
/// Ratings above about 122 900 points overflow the strength scale; the
/// returned value is then infinite and should not be fed back into
/// [`EloStrength::new`].
pub fn elo_strength(r: EloRating) -> EloStrength {
    EloStrength(pow10_400(r.0))
}

/// Inverse of [`elo_strength`]: `400 log10(s)`.
pub fn elo_rating_from_strength(s: EloStrength) -> EloRating {
    EloRating(log10_400(s.0))
}

/// Expected score of `a` against `b`: `1 / (1 + 10^((b-a)/400))`.
pub fn expected_score(a: EloRating, b: EloRating) -> f64 {
    logistic(a.0, b.0)
}

/// Odds `E/(1-E) = 10^((a-b)/400)` of `a` against `b`.
pub fn elo_odds(a: EloRating, b: EloRating) -> f64 {
    pow10_400(a.0 - b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: f64) -> EloRating {
        EloRating::new(x).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn strength_examples() {
        assert_eq!(elo_strength(r(0.0)).value(), 1.0);
        assert!(rel(elo_strength(r(400.0)).value(), 10.0) < 1e-14);
        // 10^7.1 to 40 digits
        assert!(rel(elo_strength(r(2840.0)).value(), 12_589_254.117_941_672) < 1e-12);
    }

    #[test]
    fn rating_from_strength_examples() {
        let s = |x| EloStrength::new(x).unwrap();
        assert_eq!(elo_rating_from_strength(s(1.0)).value(), 0.0);
        // 400 log10(7) and 400 log10(5.5), 40-digit references
        assert!((elo_rating_from_strength(s(7.0)).value() - 338.039_216_005_702_7).abs() < 1e-9);
        assert!((elo_rating_from_strength(s(5.5)).value() - 296.145_075_797_697_5).abs() < 1e-9);
    }

    #[test]
    fn expected_score_examples() {
        assert_eq!(expected_score(r(1500.0), r(1500.0)), 0.5);
        assert!((expected_score(r(2000.0), r(1600.0)) - 10.0 / 11.0).abs() < 1e-15);
        assert!((expected_score(r(2840.0), r(2732.0)) - 0.6506).abs() < 1e-4);
        assert!((expected_score(r(2840.0), r(2732.0)) - 0.650_604_627_933_872_5).abs() < 1e-14);
    }

    #[test]
    fn odds_examples() {
        assert_eq!(elo_odds(r(123.0), r(123.0)), 1.0);
        assert!(rel(elo_odds(r(2400.0), r(2000.0)), 10.0) < 1e-14);
        let direct = 10f64.powf(800.0 / 400.0);
        assert!(rel(elo_odds(r(2400.0), r(1600.0)), direct) < 1e-13);
        assert!(rel(elo_odds(r(2400.0), r(1600.0)), 100.0) < 1e-13);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            EloRating::new(f64::NAN),
            Err(Error::InvalidInput(_))
        ));
        assert!(EloRating::new(f64::INFINITY).is_err());
        assert!(EloStrength::new(0.0).is_err());
        assert!(EloStrength::new(-2.0).is_err());
        assert!(EloStrength::new(f64::INFINITY).is_err());
        assert!(serde_json::from_str::<EloStrength>("-1.0").is_err());
    }

    #[test]
    fn saturates_for_huge_gaps() {
        assert_eq!(expected_score(r(6500.0), r(0.0)), 1.0);
        assert!(expected_score(r(6300.0), r(0.0)) < 1.0);
        assert!(expected_score(r(0.0), r(20_000.0)) > 0.0);
        assert_eq!(expected_score(r(0.0), r(130_000.0)), 0.0);
        assert!(expected_score(r(0.0), r(1e6)).is_finite());
    }

    proptest! {
        #[test]
        fn strength_round_trip(x in -4000.0f64..4000.0) {
            let back = elo_rating_from_strength(elo_strength(r(x))).value();
            prop_assert!((back - x).abs() < 1e-9);
        }

        #[test]
        fn scores_complement(a in -4000.0f64..4000.0, b in -4000.0f64..4000.0) {
            let s = expected_score(r(a), r(b)) + expected_score(r(b), r(a));
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!((elo_odds(r(a), r(b)) * elo_odds(r(b), r(a)) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn score_matches_strength_ratio(a in -3000.0f64..3000.0, b in -3000.0f64..3000.0) {
            let (qa, qb) = (elo_strength(r(a)).value(), elo_strength(r(b)).value());
            prop_assert!((expected_score(r(a), r(b)) - qa / (qa + qb)).abs() < 1e-12);
        }

        #[test]
        fn strength_is_multiplicative(a in -2000.0f64..2000.0, d in -2000.0f64..2000.0) {
            let lhs = elo_strength(r(a + d)).value();
            let rhs = elo_strength(r(d)).value() * elo_strength(r(a)).value();
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }
    }
}
