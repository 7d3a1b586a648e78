//! Executable checks of the aggregation axioms.
//!
//! [`check_axioms`] runs seeded randomized trials of a rule against
//!
//! * same-scale normalization: `C_λ(r·1) = r`;
//! * recursive consistency: block-wise aggregation with block total weights
//!   equals direct aggregation, over every ordered partition when `n ≤ 5`
//!   and over sampled partitions otherwise;
//! * marginal Elo-strength consistency: at two equal weights,
//!   `∂_x C / ∂_y C = 10^((x-y)/400)`;
//!
//! plus the derived properties (joint relabeling, weight-scale invariance,
//! positive partials). Each check starts from a fixed anchor instance before
//! the random trials, so a failing rule reports a small, readable witness.
//! A violation is a verdict, not an error.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregation::{aggregate_in_blocks, combine};
use crate::alternatives::{partial, MARGINAL_STEP};
use crate::elo::{logistic, pow10_400};
use crate::error::{Error, Result};
use crate::profile::{Partition, RatingProfile, WeightVector};
use crate::rules::{AggregationRule, DEFAULT_ETA};

/// Rating-point tolerance for normalization, recursion, relabeling and scale checks.
pub const RATING_TOLERANCE: f64 = 1e-6;
/// Relative tolerance for the marginal-ratio check.
pub const MARGINAL_TOLERANCE: f64 = 1e-4;
/// Largest dimension for which all ordered partitions are enumerated.
pub const EXHAUSTIVE_PARTITION_LIMIT: usize = 5;

/// Controls the randomized trials of [`check_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    /// Random instances per check.
    pub samples: usize,
    pub rating_range: (f64, f64),
    pub weight_range: (f64, f64),
    pub min_dim: usize,
    pub max_dim: usize,
    /// Partitions drawn per instance when `n` exceeds the exhaustive limit.
    pub sampled_partitions: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            seed: 2026,
            samples: 1000,
            rating_range: (1000.0, 3000.0),
            weight_range: (0.1, 10.0),
            min_dim: 2,
            max_dim: 6,
            sampled_partitions: 16,
        }
    }
}

impl SampleSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let (rl, rh) = self.rating_range;
        let (wl, wh) = self.weight_range;
        if self.samples == 0 {
            return Err(Error::InvalidInput(
                "sample count must be at least 1".into(),
            ));
        }
        if !(rl.is_finite() && rh.is_finite() && rl < rh) {
            return Err(Error::InvalidInput(format!(
                "empty rating range [{rl}, {rh}]"
            )));
        }
        if !(wl.is_finite() && wh.is_finite() && wl > 0.0 && wl < wh) {
            return Err(Error::InvalidInput(format!(
                "invalid weight range [{wl}, {wh}]"
            )));
        }
        if self.min_dim < 2 || self.min_dim > self.max_dim {
            return Err(Error::InvalidInput(format!(
                "dimension range {}..={} must start at 2 or more",
                self.min_dim, self.max_dim
            )));
        }
        if self.sampled_partitions == 0 {
            return Err(Error::InvalidInput(
                "sampled partitions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn rating<R: Rng>(&self, rng: &mut R) -> f64 {
        rng.gen_range(self.rating_range.0..self.rating_range.1)
    }

    fn instance<R: Rng>(&self, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
        let n = rng.gen_range(self.min_dim..=self.max_dim);
        let ratings = (0..n).map(|_| self.rating(rng)).collect();
        let weights = (0..n)
            .map(|_| rng.gen_range(self.weight_range.0..self.weight_range.1))
            .collect();
        (ratings, weights)
    }
}

/// A concrete input on which a check was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Normalization {
        rating: f64,
        weights: Vec<f64>,
        value: f64,
    },
    Recursion {
        ratings: Vec<f64>,
        weights: Vec<f64>,
        blocks: Vec<Vec<usize>>,
        direct: f64,
        grouped: f64,
    },
    Marginal {
        x: f64,
        y: f64,
        observed_ratio: f64,
        elo_odds: f64,
    },
    Relabeling {
        ratings: Vec<f64>,
        weights: Vec<f64>,
        permutation: Vec<usize>,
        original: f64,
        permuted: f64,
    },
    WeightScale {
        ratings: Vec<f64>,
        weights: Vec<f64>,
        alpha: f64,
        original: f64,
        scaled: f64,
    },
    Monotonicity {
        ratings: Vec<f64>,
        weights: Vec<f64>,
        coordinate: usize,
        partial: f64,
    },
}

impl Witness {
    /// Discrepancy as recorded when the witness was found.
    pub fn discrepancy(&self) -> f64 {
        match self {
            Self::Normalization { rating, value, .. } => (value - rating).abs(),
            Self::Recursion {
                direct, grouped, ..
            } => (direct - grouped).abs(),
            Self::Marginal {
                observed_ratio,
                elo_odds,
                ..
            } => (observed_ratio / elo_odds - 1.0).abs(),
            Self::Relabeling {
                original, permuted, ..
            } => (original - permuted).abs(),
            Self::WeightScale {
                original, scaled, ..
            } => (original - scaled).abs(),
            Self::Monotonicity { partial, .. } => (-partial).max(0.0),
        }
    }

    /// Re-evaluates the witness from scratch against `rule` and returns the
    /// fresh discrepancy.
    pub fn reproduce(&self, rule: &AggregationRule) -> Result<f64> {
        rule.validate()?;
        let fresh = match self {
            Self::Normalization {
                rating, weights, ..
            } => normalization_case(rule, *rating, weights)?,
            Self::Recursion {
                ratings,
                weights,
                blocks,
                ..
            } => {
                let partition = Partition::new(blocks.clone(), ratings.len())?;
                recursion_case(rule, ratings, weights, &partition)?
            }
            Self::Marginal { x, y, .. } => marginal_case(rule, *x, *y),
            Self::Relabeling {
                ratings,
                weights,
                permutation,
                ..
            } => relabel_case(rule, ratings, weights, permutation)?,
            Self::WeightScale {
                ratings,
                weights,
                alpha,
                ..
            } => scale_case(rule, ratings, weights, *alpha)?,
            Self::Monotonicity {
                ratings,
                weights,
                coordinate,
                ..
            } => {
                validate_instance(ratings, weights)?;
                monotonicity_case(rule, ratings, weights, *coordinate)
            }
        };
        Ok(fresh.discrepancy())
    }
}

fn validate_instance(ratings: &[f64], weights: &[f64]) -> Result<()> {
    let p = RatingProfile::from_ratings(ratings.to_vec())?;
    WeightVector::new(weights.to_vec())?.ensure_len(p.len())
}

fn normalization_case(rule: &AggregationRule, rating: f64, weights: &[f64]) -> Result<Witness> {
    validate_instance(&vec![rating; weights.len()], weights)?;
    Ok(Witness::Normalization {
        rating,
        weights: weights.to_vec(),
        value: rule.eval_raw(&vec![rating; weights.len()], weights),
    })
}

fn recursion_case(
    rule: &AggregationRule,
    ratings: &[f64],
    weights: &[f64],
    partition: &Partition,
) -> Result<Witness> {
    validate_instance(ratings, weights)?;
    if partition.n() != ratings.len() {
        return Err(Error::Partition(
            "partition does not match the profile".into(),
        ));
    }
    Ok(Witness::Recursion {
        ratings: ratings.to_vec(),
        weights: weights.to_vec(),
        blocks: partition.blocks().to_vec(),
        direct: rule.eval_raw(ratings, weights),
        grouped: aggregate_in_blocks(ratings, weights, partition, |r, w| rule.eval_raw(r, w)),
    })
}

fn marginal_case(rule: &AggregationRule, x: f64, y: f64) -> Witness {
    let w = [1.0, 1.0];
    let f = |r: &[f64]| rule.eval_raw(r, &w);
    let dx = partial(f, &[x, y], 0, MARGINAL_STEP);
    let dy = partial(f, &[x, y], 1, MARGINAL_STEP);
    Witness::Marginal {
        x,
        y,
        observed_ratio: dx / dy,
        elo_odds: pow10_400(x - y),
    }
}

fn relabel_case(
    rule: &AggregationRule,
    ratings: &[f64],
    weights: &[f64],
    permutation: &[usize],
) -> Result<Witness> {
    validate_instance(ratings, weights)?;
    let mut sorted = permutation.to_vec();
    sorted.sort_unstable();
    if sorted != (0..ratings.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(
            "not a permutation of the coordinates".into(),
        ));
    }
    let pr: Vec<f64> = permutation.iter().map(|&i| ratings[i]).collect();
    let pw: Vec<f64> = permutation.iter().map(|&i| weights[i]).collect();
    Ok(Witness::Relabeling {
        ratings: ratings.to_vec(),
        weights: weights.to_vec(),
        permutation: permutation.to_vec(),
        original: rule.eval_raw(ratings, weights),
        permuted: rule.eval_raw(&pr, &pw),
    })
}

fn scale_case(
    rule: &AggregationRule,
    ratings: &[f64],
    weights: &[f64],
    alpha: f64,
) -> Result<Witness> {
    validate_instance(ratings, weights)?;
    let scaled_weights = WeightVector::new(weights.to_vec())?.scaled(alpha)?;
    Ok(Witness::WeightScale {
        ratings: ratings.to_vec(),
        weights: weights.to_vec(),
        alpha,
        original: rule.eval_raw(ratings, weights),
        scaled: rule.eval_raw(ratings, scaled_weights.as_slice()),
    })
}

fn monotonicity_case(
    rule: &AggregationRule,
    ratings: &[f64],
    weights: &[f64],
    j: usize,
) -> Witness {
    let f = |r: &[f64]| rule.eval_raw(r, weights);
    Witness::Monotonicity {
        ratings: ratings.to_vec(),
        weights: weights.to_vec(),
        coordinate: j,
        partial: partial(f, ratings, j, MARGINAL_STEP),
    }
}

/// Outcome of one check over all of its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub cases: usize,
    pub tolerance: f64,
    pub max_discrepancy: f64,
    /// First case that exceeded the tolerance; always present when `holds` is false.
    pub witness: Option<Witness>,
}

struct Tally {
    tolerance: f64,
    cases: usize,
    max_discrepancy: f64,
    witness: Option<Witness>,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            cases: 0,
            max_discrepancy: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, w: Witness) {
        let d = w.discrepancy();
        let d = if d.is_nan() { f64::INFINITY } else { d };
        self.cases += 1;
        self.max_discrepancy = self.max_discrepancy.max(d);
        if d > self.tolerance && self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn finish(self) -> AxiomVerdict {
        AxiomVerdict {
            holds: self.witness.is_none(),
            cases: self.cases,
            tolerance: self.tolerance,
            max_discrepancy: self.max_discrepancy,
            witness: self.witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub rule: AggregationRule,
    pub normalization: AxiomVerdict,
    pub recursion: AxiomVerdict,
    pub marginal: AxiomVerdict,
    pub relabeling: AxiomVerdict,
    pub weight_scale: AxiomVerdict,
    pub monotonicity: AxiomVerdict,
}

impl AxiomReport {
    /// `[normalization, recursion, marginal]`.
    pub fn substantive(&self) -> [bool; 3] {
        [
            self.normalization.holds,
            self.recursion.holds,
            self.marginal.holds,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.substantive().iter().all(|&h| h)
            && self.relabeling.holds
            && self.weight_scale.holds
            && self.monotonicity.holds
    }

    pub fn verdicts(&self) -> [(&'static str, &AxiomVerdict); 6] {
        [
            ("normalization", &self.normalization),
            ("recursion", &self.recursion),
            ("marginal", &self.marginal),
            ("relabeling", &self.relabeling),
            ("weight_scale", &self.weight_scale),
            ("monotonicity", &self.monotonicity),
        ]
    }
}

pub fn check_axioms(rule: &AggregationRule, spec: &SampleSpec) -> Result<AxiomReport> {
    rule.validate()?;
    spec.validate()?;
    // Each check gets its own stream so that changing one does not reshuffle the others.
    let stream =
        |k: u64| ChaCha8Rng::seed_from_u64(spec.seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15));

    let mut normalization = Tally::new(RATING_TOLERANCE);
    normalization.record(normalization_case(rule, 0.0, &[1.0, 1.0])?);
    let mut rng = stream(1);
    for _ in 0..spec.samples {
        let (_, weights) = spec.instance(&mut rng);
        let r = spec.rating(&mut rng);
        normalization.record(normalization_case(rule, r, &weights)?);
    }

    let mut recursion = Tally::new(RATING_TOLERANCE);
    let anchor = Partition::new(vec![vec![0, 1], vec![2]], 3)?;
    recursion.record(recursion_case(
        rule,
        &[0.0, 400.0, 400.0],
        &[1.0, 1.0, 1.0],
        &anchor,
    )?);
    let exhaustive: Vec<Vec<Partition>> = (0..=EXHAUSTIVE_PARTITION_LIMIT.min(spec.max_dim))
        .map(Partition::all_ordered)
        .collect();
    let mut rng = stream(2);
    for _ in 0..spec.samples {
        let (ratings, weights) = spec.instance(&mut rng);
        let n = ratings.len();
        if n <= EXHAUSTIVE_PARTITION_LIMIT {
            for p in &exhaustive[n] {
                recursion.record(recursion_case(rule, &ratings, &weights, p)?);
            }
        } else {
            for _ in 0..spec.sampled_partitions {
                let p = Partition::random(n, &mut rng);
                recursion.record(recursion_case(rule, &ratings, &weights, &p)?);
            }
        }
    }

    let mut marginal = Tally::new(MARGINAL_TOLERANCE);
    marginal.record(marginal_case(rule, 400.0, 0.0));
    let mut rng = stream(3);
    for _ in 0..spec.samples {
        let (x, y) = (spec.rating(&mut rng), spec.rating(&mut rng));
        marginal.record(marginal_case(rule, x, y));
    }

    let mut relabeling = Tally::new(RATING_TOLERANCE);
    let mut weight_scale = Tally::new(RATING_TOLERANCE);
    let mut monotonicity = Tally::new(0.0);
    let mut rng = stream(4);
    for _ in 0..spec.samples {
        let (ratings, weights) = spec.instance(&mut rng);
        let mut perm: Vec<usize> = (0..ratings.len()).collect();
        perm.shuffle(&mut rng);
        relabeling.record(relabel_case(rule, &ratings, &weights, &perm)?);
        let alpha = 10f64.powf(rng.gen_range(-3.0..3.0));
        weight_scale.record(scale_case(rule, &ratings, &weights, alpha)?);
        let j = rng.gen_range(0..ratings.len());
        monotonicity.record(monotonicity_case(rule, &ratings, &weights, j));
    }

    Ok(AxiomReport {
        rule: *rule,
        normalization: normalization.finish(),
        recursion: recursion.finish(),
        marginal: marginal.finish(),
        relabeling: relabeling.finish(),
        weight_scale: weight_scale.finish(),
        monotonicity: monotonicity.finish(),
    })
}

/// The four rules that separate the three substantive axioms, with the
/// verdict pattern `[normalization, recursion, marginal]` each must show.
pub fn independence_rules() -> [(AggregationRule, [bool; 3]); 4] {
    [
        (AggregationRule::Main, [true, true, true]),
        (AggregationRule::Arithmetic, [true, true, false]),
        (AggregationRule::Piecewise, [true, false, true]),
        (
            AggregationRule::Entropy { eta: DEFAULT_ETA },
            [false, true, true],
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceMatrix {
    pub reports: Vec<AxiomReport>,
    pub matches_expected: bool,
}

pub fn independence_matrix(spec: &SampleSpec) -> Result<IndependenceMatrix> {
    let mut reports = Vec::new();
    let mut matches_expected = true;
    for (rule, expected) in independence_rules() {
        let report = check_axioms(&rule, spec)?;
        matches_expected &= report.substantive() == expected;
        reports.push(report);
    }
    Ok(IndependenceMatrix {
        reports,
        matches_expected,
    })
}

/// Three-format profiles whose uniform-lottery comparisons form a cycle.
pub fn cycle_profiles() -> [RatingProfile; 3] {
    let labels = || vec!["f1", "f2", "f3"];
    [
        RatingProfile::new(labels(), vec![2800.0, 2400.0, 2000.0]),
        RatingProfile::new(labels(), vec![2400.0, 2000.0, 2800.0]),
        RatingProfile::new(labels(), vec![2000.0, 2800.0, 2400.0]),
    ]
    .map(|p| p.expect("fixed profiles are valid"))
}

/// `(1/3)(10/11 + 10/11 + 1/101)`
pub const CYCLE_LOTTERY: f64 = 677.0 / 1111.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub profiles: [RatingProfile; 3],
    /// Uniform-lottery probabilities for (X,Y), (Y,Z), (Z,X).
    pub lottery: [f64; 3],
    /// Equal-weight combined ratings of X, Y, Z.
    pub combined: [f64; 3],
    /// Combined-rating probabilities for (X,Y), (Y,Z), (Z,X).
    pub combined_probability: [f64; 3],
    pub reference_lottery: f64,
}

impl CycleReport {
    /// Every lottery comparison strictly favours the first player.
    pub fn is_cycle(&self) -> bool {
        self.lottery.iter().all(|&p| p > 0.5)
    }

    pub fn lottery_error(&self) -> f64 {
        self.lottery
            .iter()
            .map(|p| (p - self.reference_lottery).abs())
            .fold(0.0, f64::max)
    }

    pub fn combined_spread(&self) -> f64 {
        let hi = self
            .combined
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = self.combined.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn verified(&self) -> bool {
        self.is_cycle() && self.lottery_error() <= 1e-12 && self.combined_spread() <= 1e-9
    }
}

pub fn verify_cycle() -> CycleReport {
    let profiles = cycle_profiles();
    let eq = [1.0; 3];
    let pairs = [(0, 1), (1, 2), (2, 0)];
    let lottery = pairs.map(|(a, b)| {
        profiles[a]
            .ratings()
            .iter()
            .zip(profiles[b].ratings())
            .map(|(&x, &y)| logistic(x, y) / 3.0)
            .sum()
    });
    let combined = [0, 1, 2].map(|i| combine(profiles[i].ratings(), &eq));
    let combined_probability = pairs.map(|(a, b)| logistic(combined[a], combined[b]));
    CycleReport {
        profiles,
        lottery,
        combined,
        combined_probability,
        reference_lottery: CYCLE_LOTTERY,
    }
}
