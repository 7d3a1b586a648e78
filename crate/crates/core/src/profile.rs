//! Validated input types: rating profiles, primitive weights, format
//! distributions and ordered partitions of coordinates.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::elo::EloRating;
use crate::error::{Error, Result};

/// Named vector of Elo ratings, one per format or coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingProfile {
    labels: Vec<String>,
    ratings: Vec<f64>,
}

impl RatingProfile {
    pub fn new<S: Into<String>>(labels: Vec<S>, ratings: Vec<f64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if ratings.is_empty() {
            return Err(Error::InvalidInput(
                "a profile needs at least one rating".into(),
            ));
        }
        if labels.len() != ratings.len() {
            return Err(Error::Dimension {
                expected: labels.len(),
                found: ratings.len(),
            });
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate label `{label}`")));
            }
        }
        for &r in &ratings {
            EloRating::new(r)?;
        }
        Ok(Self { labels, ratings })
    }

    /// Profile with positional labels `r1, r2, ...`.
    pub fn from_ratings(ratings: Vec<f64>) -> Result<Self> {
        let labels = (1..=ratings.len()).map(|i| format!("r{i}")).collect();
        Self::new(labels, ratings)
    }

    /// Uniform profile `r·1` of length `n`.
    pub fn uniform(rating: f64, n: usize) -> Result<Self> {
        Self::from_ratings(vec![rating; n])
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ratings(&self) -> &[f64] {
        &self.ratings
    }

    pub fn rating(&self, index: usize) -> EloRating {
        EloRating::new(self.ratings[index]).expect("validated on construction")
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.index_of(label).map(|i| self.ratings[i])
    }

    /// Returns a copy with `ratings[index]` replaced.
    pub fn with_rating(&self, index: usize, rating: f64) -> Result<Self> {
        EloRating::new(rating)?;
        let mut out = self.clone();
        out.ratings[index] = rating;
        Ok(out)
    }

    /// Adds `delta` to every coordinate.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(
            self.labels.clone(),
            self.ratings.iter().map(|r| r + delta).collect(),
        )
    }

    pub(crate) fn ensure_same_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: n,
                found: self.len(),
            })
        }
    }
}

/// Non-negative primitive weights with at least one positive entry.
///
/// Zero entries are admitted and drop the coordinate out of strength averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {w} must be finite and non-negative"
            )));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(Self(weights))
    }

    pub fn equal(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `λ / Σλ`.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        Self(self.0.iter().map(|w| w / total).collect())
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidWeights(format!(
                "scale {alpha} must be positive"
            )));
        }
        Self::new(self.0.iter().map(|w| w * alpha).collect())
    }

    pub(crate) fn ensure_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: n,
                found: self.len(),
            })
        }
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

/// `λ / Σλ` as a free function.
pub fn normalize_weights(weights: &WeightVector) -> WeightVector {
    weights.normalized()
}

/// Exogenous format-selection probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "probability {p} must be finite and non-negative"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self(probs))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    /// Point mass on coordinate `index`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidDistribution(format!(
                "basis index {index} out of range for {n} formats"
            )));
        }
        let mut v = vec![0.0; n];
        v[index] = 1.0;
        Ok(Self(v))
    }

    pub fn from_weights(weights: &WeightVector) -> Self {
        Self(weights.normalized().0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Vec<f64> {
        d.0
    }
}

/// Ordered partition of the coordinate indices `0..n` into nonempty blocks.
///
/// Indices inside a block keep whatever order they were given in; the
/// constructors here always produce ascending blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::Partition(format!("index {i} out of range 0..{n}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Partition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("index {i} is not covered")));
        }
        Ok(Self { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Every ordered partition of `0..n` (Fubini number many: 1, 3, 13, 75, 541, ...).
    pub fn all_ordered(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for blocks in set_partitions(n) {
            let mut order: Vec<usize> = (0..blocks.len()).collect();
            loop {
                out.push(Self {
                    n,
                    blocks: order.iter().map(|&b| blocks[b].clone()).collect(),
                });
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
        out
    }

    /// A random ordered partition: shuffle the indices, cut at random points,
    /// then sort each block.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        let mut blocks = Vec::new();
        let mut current = Vec::new();
        for (k, i) in idx.into_iter().enumerate() {
            current.push(i);
            if k + 1 < n && rng.gen_bool(0.5) {
                blocks.push(std::mem::take(&mut current));
            }
        }
        blocks.push(current);
        for b in &mut blocks {
            b.sort_unstable();
        }
        Self { n, blocks }
    }
}

/// Unordered set partitions of `0..n` via restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Lexicographic next permutation; returns false after the last one.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
