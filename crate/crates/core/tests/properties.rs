use std::path::Path;

use combined_elo::io::{
    compare_methods, parse_ratings, parse_ratings_file, rank_players, write_ratings, InputFormat,
    PlayerRecord,
};
use combined_elo::probability::normalizing_offset;
use combined_elo::{
    combined_rating, endogenous_weights, lottery_probability, pooling_rating, power_mean_rating,
    recursive_aggregate, AggregationRule, Distribution, Partition, PowerMeanParameter,
    RatingProfile, WeightVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn profile(r: &[f64]) -> RatingProfile {
    RatingProfile::from_ratings(r.to_vec()).unwrap()
}

fn weights(w: &[f64]) -> WeightVector {
    WeightVector::new(w.to_vec()).unwrap()
}

fn profile_and_weights(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(-3500.0f64..3500.0, n),
            prop::collection::vec(0.05f64..20.0, n),
        )
    })
}

fn fixture() -> Vec<PlayerRecord> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/top20_2026-04-19.csv");
    parse_ratings_file(&path, None).unwrap()
}

/// Rule-level blockwise evaluation through the public API only.
fn blockwise(rule: &AggregationRule, r: &[f64], w: &[f64], part: &Partition) -> f64 {
    let mut br = Vec::new();
    let mut bw = Vec::new();
    for block in part.blocks() {
        let sr: Vec<f64> = block.iter().map(|&i| r[i]).collect();
        let sw: Vec<f64> = block.iter().map(|&i| w[i]).collect();
        br.push(rule.evaluate(&profile(&sr), &weights(&sw)).unwrap().value());
        bw.push(sw.iter().sum());
    }
    rule.evaluate(&profile(&br), &weights(&bw)).unwrap().value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matches_unshifted_formula((r, w) in profile_and_weights(6)) {
        let c = combined_rating(&profile(&r), &weights(&w)).unwrap().value();
        let num: f64 = r.iter().zip(&w).map(|(x, l)| l * 10f64.powf(x / 400.0)).sum();
        let oracle = 400.0 * (num / w.iter().sum::<f64>()).log10();
        prop_assert!((c - oracle).abs() < 1e-8, "{c} vs {oracle}");
    }

    #[test]
    fn monotone_in_each_coordinate((r, w) in profile_and_weights(6), j in 0usize..6, bump in 0.5f64..300.0) {
        let j = j % r.len();
        let base = combined_rating(&profile(&r), &weights(&w)).unwrap().value();
        let mut up = r.clone();
        up[j] += bump;
        let raised = combined_rating(&profile(&up), &weights(&w)).unwrap().value();
        prop_assert!(raised >= base);
        let top = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if up[j] > top - 1000.0 {
            prop_assert!(raised > base);
        }
    }

    #[test]
    fn power_mean_increases_with_p(
        (r, w) in profile_and_weights(5),
        p1 in -4.0f64..4.0,
        dp in 0.01f64..3.0,
    ) {
        let (prof, wv) = (profile(&r), weights(&w));
        let lo = power_mean_rating(&prof, &wv, PowerMeanParameter::new(p1).unwrap()).unwrap().value();
        let hi = power_mean_rating(&prof, &wv, PowerMeanParameter::new(p1 + dp).unwrap()).unwrap().value();
        prop_assert!(hi >= lo - 1e-9, "p={p1}: {lo} > {hi}");
    }

    #[test]
    fn power_mean_internal_and_translation_equivariant(
        (r, w) in profile_and_weights(5),
        p in -5.0f64..5.0,
        d in -1000.0f64..1000.0,
    ) {
        let (prof, wv) = (profile(&r), weights(&w));
        let pm = PowerMeanParameter::new(p).unwrap();
        let g = power_mean_rating(&prof, &wv, pm).unwrap().value();
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(g >= lo && g <= hi);
        let shifted = power_mean_rating(&prof.shifted(d).unwrap(), &wv, pm).unwrap().value();
        prop_assert!((shifted - g - d).abs() < 1e-8);
    }

    #[test]
    fn endogenous_weights_degenerate_to_lambda(
        (r, w) in profile_and_weights(5),
        d in -500.0f64..500.0,
    ) {
        let n = r.len();
        let a = RatingProfile::uniform(1800.0 + d, n).unwrap();
        let got = endogenous_weights(&a, &a, &weights(&w)).unwrap();
        let total: f64 = w.iter().sum();
        for (g, l) in got.iter().zip(&w) {
            prop_assert!((g - l / total).abs() < 1e-12);
        }
        // S = R is not enough on its own: the masses still follow q(R_i)
        let own = endogenous_weights(&profile(&r), &profile(&r), &weights(&w)).unwrap();
        let s: f64 = own.iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lottery_is_affine_in_distribution(
        a in prop::collection::vec(2000.0f64..2900.0, 3),
        b in prop::collection::vec(2000.0f64..2900.0, 3),
        x in prop::collection::vec(0.01f64..1.0, 3),
        y in prop::collection::vec(0.01f64..1.0, 3),
        t in 0.0f64..1.0,
    ) {
        let (pa, pb) = (profile(&a), profile(&b));
        let norm = |v: &[f64]| {
            let s: f64 = v.iter().sum();
            v.iter().map(|e| e / s).collect::<Vec<_>>()
        };
        let (px, py) = (norm(&x), norm(&y));
        let mix: Vec<f64> = px.iter().zip(&py).map(|(u, v)| t * u + (1.0 - t) * v).collect();
        let f = |p: &[f64]| lottery_probability(&pa, &pb, &Distribution::new(p.to_vec()).unwrap()).unwrap();
        let lhs = f(&mix);
        let rhs = t * f(&px) + (1.0 - t) * f(&py);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pooling_offset_shifts_rating(
        (r, w) in profile_and_weights(5),
        k in -300.0f64..300.0,
    ) {
        let (prof, wv) = (profile(&r), weights(&w));
        let c = combined_rating(&prof, &wv).unwrap().value();
        let normal = pooling_rating(&prof, &wv, normalizing_offset(&wv)).unwrap().value();
        prop_assert!((normal - c).abs() < 1e-8);
        let other = pooling_rating(&prof, &wv, normalizing_offset(&wv) + k).unwrap().value();
        prop_assert!((other - c - k).abs() < 1e-8);
    }

    #[test]
    fn entropy_rule_is_recursive(
        (r, w) in profile_and_weights(6),
        eta in 0.1f64..3.0,
        seed in any::<u64>(),
    ) {
        let rule = AggregationRule::entropy(eta).unwrap();
        let part = Partition::random(r.len(), &mut ChaCha8Rng::seed_from_u64(seed));
        let direct = rule.evaluate(&profile(&r), &weights(&w)).unwrap().value();
        let grouped = blockwise(&rule, &r, &w, &part);
        prop_assert!((direct - grouped).abs() < 1e-6, "{direct} vs {grouped}");
    }
}

#[test]
fn recursion_on_random_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let r: Vec<f64> = (0..n).map(|_| rng.gen_range(1000.0..3000.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let part = Partition::random(n, &mut rng);
        let (prof, wv) = (profile(&r), weights(&w));
        let direct = combined_rating(&prof, &wv).unwrap().value();
        let grouped = recursive_aggregate(&prof, &wv, &part).unwrap().value();
        worst = worst.max((direct - grouped).abs());
    }
    assert!(worst < 1e-6, "worst {worst}");
}

#[test]
fn csv_and_json_round_trip() {
    let records = fixture();
    for format in [InputFormat::Csv, InputFormat::Json] {
        let mut buf = Vec::new();
        write_ratings(&records, &mut buf, format).unwrap();
        let back = parse_ratings(buf.as_slice(), format).unwrap();
        assert_eq!(back, records, "{format:?}");
    }
}

#[test]
fn leaderboard_invariant_under_rescaling_and_reordering() {
    let records = fixture();
    let base = rank_players(&records, &WeightVector::equal(3).unwrap()).unwrap();
    let order = |b: &combined_elo::io::Leaderboard| {
        b.rows.iter().map(|r| r.name.clone()).collect::<Vec<_>>()
    };

    let scaled = rank_players(&records, &weights(&[7.5, 7.5, 7.5])).unwrap();
    assert_eq!(order(&scaled), order(&base));

    // rotate the formats (classical moves to the back) jointly with the weights
    let perm = [1usize, 2, 0];
    let rotated: Vec<PlayerRecord> = records
        .iter()
        .map(|rec| {
            let labels: Vec<String> = perm
                .iter()
                .map(|&i| rec.profile.labels()[i].clone())
                .collect();
            let ratings: Vec<f64> = perm.iter().map(|&i| rec.profile.ratings()[i]).collect();
            PlayerRecord {
                name: rec.name.clone(),
                profile: RatingProfile::new(labels, ratings).unwrap(),
                classical_rank: rec.classical_rank,
            }
        })
        .collect();
    let uneven = weights(&[1.0, 2.0, 3.0]);
    let uneven_rot = weights(&[2.0, 3.0, 1.0]);
    let a = rank_players(&records, &uneven).unwrap();
    let b = rank_players(&rotated, &uneven_rot).unwrap();
    assert_eq!(order(&a), order(&b));
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert!((x.combined - y.combined).abs() < 1e-9);
    }
}

#[test]
fn comparison_zero_exponent_is_plain_average() {
    let records = fixture();
    let ps = [
        PowerMeanParameter::new(0.0).unwrap(),
        PowerMeanParameter::new(1.0).unwrap(),
    ];
    let table = compare_methods(&records, &WeightVector::equal(3).unwrap(), &ps).unwrap();
    for row in &table.rows {
        assert!((row.power_means[0] - row.arithmetic).abs() < 1e-9);
        assert!((row.power_means[1] - row.combined).abs() < 1e-9);
        assert!(row.combined >= row.arithmetic - 1e-9);
    }
}

#[test]
fn blitz_specialist_row() {
    let board = rank_players(&fixture(), &WeightVector::equal(3).unwrap()).unwrap();
    let row = board
        .rows
        .iter()
        .find(|r| r.name == "Dubov, Daniil")
        .unwrap();
    assert_eq!(row.display, 2721);
    assert_eq!(row.combined_rank, 14);
    assert_eq!(row.classical_rank, 59);
}
