use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use combined_elo::io::{
    compare_methods, matchup_report, parse_ratings_file, rank_players, render_matchup, InputFormat,
    PlayerRecord,
};
use combined_elo::verification::{independence_matrix, AxiomReport, AxiomVerdict};
use combined_elo::{
    check_axioms, combined_rating, marginal_weights, role_display_rating, role_update,
    verify_cycle, AggregationRule, Distribution, Error, GameResult, PowerMeanParameter,
    RatingProfile, RoleProfile, SampleSpec, WeightVector,
};

macro_rules! out {
    ($($t:tt)*) => { write!(std::io::stdout().lock(), $($t)*)? };
}

macro_rules! outln {
    ($($t:tt)*) => { writeln!(std::io::stdout().lock(), $($t)*)? };
}

/// Combine several Elo ratings into one Elo-scale rating.
#[derive(Parser, Debug)]
#[command(name = "combined-elo", version, about)]
struct Cli {
    /// Output style
    #[arg(long, value_enum, global = true, default_value_t = Output::Text)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Combined rating and marginal weights of one rating vector
    Combine {
        /// Comma-separated ratings, e.g. 2840,2832,2869
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        ratings: Vec<f64>,
        /// Comma-separated format labels
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        /// Comma-separated primitive weights (default: equal)
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Leaderboard ordered by combined rating
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Probabilities for one matchup
    Matchup {
        #[command(flatten)]
        input: InputArgs,
        /// First player's name
        #[arg(long)]
        a: String,
        /// Second player's name
        #[arg(long)]
        b: String,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Format lottery: `uniform` or comma-separated probabilities
        #[arg(long)]
        lottery: Option<String>,
    },
    /// Arithmetic, power-mean and combined ratings side by side
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Comma-separated power-mean exponents
        #[arg(long = "p", value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0], allow_hyphen_values = true)]
        p_list: Vec<f64>,
    },
    /// Seeded numerical checks of the aggregation axioms
    VerifyAxioms {
        /// Rule to check; `all` checks the four-rule independence matrix
        #[arg(long, value_enum, default_value_t = RuleArg::All)]
        rule: RuleArg,
        /// Entropy strength for the entropy rule
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Exponent for the power-mean rule
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Intransitive three-player random-format lottery
    CycleDemo,
    /// Elo update of the role coordinates played in one game
    RoleUpdate {
        /// First player's role ratings, e.g. white=2800,black=2750
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        /// Second player's role ratings
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long)]
        role_a: String,
        #[arg(long)]
        role_b: String,
        /// First player's score: 0, 0.5 or 1
        #[arg(long)]
        score: f64,
        #[arg(long, default_value_t = combined_elo::roles::DEFAULT_K)]
        k: f64,
        /// Weights for the displayed rating (default: equal)
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    /// Ratings file (CSV or JSON)
    #[arg(long, short)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted
    #[arg(long)]
    format: Option<InputFormat>,
}

impl InputArgs {
    fn load(&self) -> Result<Vec<PlayerRecord>, Error> {
        parse_ratings_file(&self.input, self.format)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    All,
    Main,
    Arithmetic,
    Piecewise,
    Entropy,
    PowerMean,
}

fn weights_for(weights: Option<Vec<f64>>, n: usize) -> Result<WeightVector, Error> {
    match weights {
        Some(w) => {
            let w = WeightVector::new(w)?;
            if w.len() != n {
                return Err(Error::SchemaMismatch(format!(
                    "{} weights for {n} formats",
                    w.len()
                )));
            }
            Ok(w)
        }
        None => WeightVector::equal(n.max(1)),
    }
}

fn format_count(records: &[PlayerRecord]) -> usize {
    records.first().map_or(0, |r| r.profile.len())
}

fn find<'a>(records: &'a [PlayerRecord], name: &str) -> Result<&'a PlayerRecord, Error> {
    records
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("no player named `{name}`")))
}

fn parse_roles(pairs: &[String]) -> Result<RatingProfile, Error> {
    let mut labels = Vec::new();
    let mut ratings = Vec::new();
    for pair in pairs {
        let (label, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected role=rating, got `{pair}`")))?;
        labels.push(label.trim().to_owned());
        ratings.push(
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("rating `{value}` is not a number")))?,
        );
    }
    RatingProfile::new(labels, ratings)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn verdict_line(name: &str, v: &AxiomVerdict) -> String {
    format!(
        "  {name:<14} {:<5} cases={:<7} max discrepancy={:.3e} (tol {:.0e})",
        if v.holds { "holds" } else { "FAILS" },
        v.cases,
        v.max_discrepancy,
        v.tolerance
    )
}

fn print_report(report: &AxiomReport) -> Result<(), Error> {
    outln!("rule {}", report.rule);
    for (name, v) in report.verdicts() {
        outln!("{}", verdict_line(name, v));
        if let Some(w) = &v.witness {
            outln!("    witness: {}", serde_json::to_string(w)?);
        }
    }
    Ok(())
}

/// Runs a subcommand; `Ok(false)` means a verification did not pass.
fn run(cli: Cli) -> Result<bool, Error> {
    let json = cli.output == Output::Json;
    match cli.command {
        Command::Combine {
            ratings,
            labels,
            weights,
        } => {
            let profile = match labels {
                Some(l) => RatingProfile::new(l, ratings)?,
                None => RatingProfile::from_ratings(ratings)?,
            };
            let w = weights_for(weights, profile.len())?;
            let c = combined_rating(&profile, &w)?;
            let mw = marginal_weights(&profile, &w)?;
            if json {
                print_json(&json!({
                    "labels": profile.labels(),
                    "ratings": profile.ratings(),
                    "weights": w,
                    "combined": c.value(),
                    "marginal_weights": mw,
                }))?;
            } else {
                outln!("combined rating: {:.2}", c.value());
                for (label, m) in profile.labels().iter().zip(mw.as_slice()) {
                    outln!("  {label:<12} marginal weight {m:.4}");
                }
            }
        }
        Command::Rank { input, weights } => {
            let records = input.load()?;
            let w = weights_for(weights, format_count(&records))?;
            let board = rank_players(&records, &w)?;
            if json {
                print_json(&board)?;
            } else {
                out!("{board}");
            }
        }
        Command::Matchup {
            input,
            a,
            b,
            weights,
            lottery,
        } => {
            let records = input.load()?;
            let (pa, pb) = (find(&records, &a)?, find(&records, &b)?);
            let n = pa.profile.len();
            let w = weights_for(weights, n)?;
            let pi = match lottery.as_deref() {
                None => None,
                Some("uniform") => Some(Distribution::uniform(n)?),
                Some(list) => Some(Distribution::new(
                    list.split(',')
                        .map(|x| {
                            x.trim().parse::<f64>().map_err(|_| {
                                Error::InvalidDistribution(format!("`{x}` is not a number"))
                            })
                        })
                        .collect::<Result<_, _>>()?,
                )?),
            };
            let report = matchup_report(pa, pb, &w, pi.as_ref())?;
            if json {
                print_json(&json!({
                    "a": a,
                    "b": b,
                    "report": report,
                    "rating_difference": report.rating_difference(),
                    "gap": report.gap(),
                }))?;
            } else {
                out!("{}", render_matchup(&report, &a, &b));
            }
        }
        Command::Compare {
            input,
            weights,
            p_list,
        } => {
            let records = input.load()?;
            let w = weights_for(weights, format_count(&records))?;
            let ps = p_list
                .into_iter()
                .map(PowerMeanParameter::new)
                .collect::<Result<Vec<_>, _>>()?;
            let table = compare_methods(&records, &w, &ps)?;
            if json {
                print_json(&table)?;
            } else {
                out!("{table}");
            }
        }
        Command::VerifyAxioms {
            rule,
            eta,
            p,
            seed,
            samples,
        } => {
            let spec = SampleSpec {
                seed,
                samples,
                ..SampleSpec::default()
            };
            let single = match rule {
                RuleArg::All => None,
                RuleArg::Main => Some(AggregationRule::Main),
                RuleArg::Arithmetic => Some(AggregationRule::Arithmetic),
                RuleArg::Piecewise => Some(AggregationRule::Piecewise),
                RuleArg::Entropy => Some(AggregationRule::entropy(eta)?),
                RuleArg::PowerMean => Some(AggregationRule::power_mean(p)?),
            };
            match single {
                Some(rule) => {
                    let report = check_axioms(&rule, &spec)?;
                    if json {
                        print_json(&report)?;
                    } else {
                        print_report(&report)?;
                    }
                    return Ok(report.all_hold());
                }
                None => {
                    let matrix = independence_matrix(&spec)?;
                    if json {
                        print_json(&matrix)?;
                    } else {
                        for report in &matrix.reports {
                            print_report(report)?;
                        }
                        outln!(
                            "independence pattern {}",
                            if matrix.matches_expected {
                                "matches"
                            } else {
                                "DOES NOT match"
                            }
                        );
                    }
                    return Ok(matrix.matches_expected);
                }
            }
        }
        Command::CycleDemo => {
            let report = verify_cycle();
            if json {
                print_json(&report)?;
            } else {
                let names = ["X", "Y", "Z"];
                for (name, p) in names.iter().zip(&report.profiles) {
                    outln!("{name} = {:?}", p.ratings());
                }
                for (k, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                    outln!(
                        "P_lottery({} beats {}) = {:.5}   P_combined = {:.4}",
                        names[a],
                        names[b],
                        report.lottery[k],
                        report.combined_probability[k]
                    );
                }
                outln!(
                    "combined ratings: {:.2}, {:.2}, {:.2}",
                    report.combined[0],
                    report.combined[1],
                    report.combined[2]
                );
                outln!(
                    "cycle {}",
                    if report.verified() {
                        "verified"
                    } else {
                        "NOT verified"
                    }
                );
            }
            return Ok(report.verified());
        }
        Command::RoleUpdate {
            a,
            b,
            role_a,
            role_b,
            score,
            k,
            weights,
        } => {
            let pa = RoleProfile::new(parse_roles(&a)?, k)?;
            let pb = RoleProfile::new(parse_roles(&b)?, k)?;
            let result = GameResult::try_from(score)?;
            let expected = combined_elo::role_expected_score(&pa, &pb, &role_a, &role_b)?;
            let (na, nb) = role_update(&pa, &pb, &role_a, &role_b, result, k)?;
            let wa = weights_for(weights.clone(), na.ratings().len())?;
            let wb = weights_for(weights, nb.ratings().len())?;
            let (da, db) = (
                role_display_rating(&na, &wa)?,
                role_display_rating(&nb, &wb)?,
            );
            if json {
                print_json(&json!({
                    "expected_score": expected,
                    "a": { "ratings": na.ratings(), "display": da.value() },
                    "b": { "ratings": nb.ratings(), "display": db.value() },
                }))?;
            } else {
                outln!("expected score: {expected:.4}");
                for (tag, p, d) in [("A", &na, da), ("B", &nb, db)] {
                    let coords: Vec<String> = p
                        .ratings()
                        .labels()
                        .iter()
                        .zip(p.ratings().ratings())
                        .map(|(l, r)| format!("{l}={r:.2}"))
                        .collect();
                    outln!("{tag}: {}   displayed {:.2}", coords.join(" "), d.value());
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
