//! Role-specific ratings (for example White and Black) with an Elo-style
//! update that touches only the coordinates played in a game. The displayed
//! scalar is always recomputed from the role coordinates; predictions use the
//! role coordinates directly.

use serde::{Deserialize, Serialize};

use crate::aggregation::combined_rating;
use crate::elo::{logistic, EloRating};
use crate::error::{Error, Result};
use crate::profile::{RatingProfile, WeightVector};

pub const DEFAULT_K: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleProfile {
    ratings: RatingProfile,
    k: f64,
}

impl RoleProfile {
    pub fn new(ratings: RatingProfile, k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(Self { ratings, k })
    }

    pub fn with_default_k(ratings: RatingProfile) -> Self {
        Self {
            ratings,
            k: DEFAULT_K,
        }
    }

    pub fn ratings(&self) -> &RatingProfile {
        &self.ratings
    }

    /// Update factor this player is normally rated with.
    pub fn k(&self) -> f64 {
        self.k
    }

    fn role(&self, role: &str) -> Result<usize> {
        self.ratings
            .index_of(role)
            .ok_or_else(|| Error::UnknownRole(role.to_owned()))
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "update factor K = {k} must be positive"
        )))
    }
}

/// Score of the first player in a single game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub enum GameResult {
    Loss,
    Draw,
    Win,
}

impl GameResult {
    pub fn score(self) -> f64 {
        match self {
            Self::Loss => 0.0,
            Self::Draw => 0.5,
            Self::Win => 1.0,
        }
    }
}

impl TryFrom<f64> for GameResult {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        if s == 0.0 {
            Ok(Self::Loss)
        } else if s == 0.5 {
            Ok(Self::Draw)
        } else if s == 1.0 {
            Ok(Self::Win)
        } else {
            Err(Error::InvalidScore(s))
        }
    }
}

impl From<GameResult> for f64 {
    fn from(g: GameResult) -> f64 {
        g.score()
    }
}

/// Expected score of `a` playing `role_a` against `b` playing `role_b`.
pub fn role_expected_score(
    a: &RoleProfile,
    b: &RoleProfile,
    role_a: &str,
    role_b: &str,
) -> Result<f64> {
    let ra = a.ratings.ratings()[a.role(role_a)?];
    let rb = b.ratings.ratings()[b.role(role_b)?];
    Ok(logistic(ra, rb))
}

/// Applies `R_a += K(s - E_a)` and `R_b += K(E_a - s)` to the played role
/// coordinates. The two deltas are exact negatives of each other.
pub fn role_update(
    a: &RoleProfile,
    b: &RoleProfile,
    role_a: &str,
    role_b: &str,
    result: GameResult,
    k: f64,
) -> Result<(RoleProfile, RoleProfile)> {
    check_k(k)?;
    let (ia, ib) = (a.role(role_a)?, b.role(role_b)?);
    let expected = role_expected_score(a, b, role_a, role_b)?;
    let s = result.score();
    let ra = a.ratings.ratings()[ia] + k * (s - expected);
    let rb = b.ratings.ratings()[ib] + k * (expected - s);
    Ok((
        RoleProfile {
            ratings: a.ratings.with_rating(ia, ra)?,
            k: a.k,
        },
        RoleProfile {
            ratings: b.ratings.with_rating(ib, rb)?,
            k: b.k,
        },
    ))
}

/// Displayed scalar rating: the combined rating over the role coordinates.
pub fn role_display_rating(a: &RoleProfile, weights: &WeightVector) -> Result<EloRating> {
    combined_rating(&a.ratings, weights)
}
