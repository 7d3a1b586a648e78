//! Ratings files, leaderboards and text rendering.
//!
//! CSV input has a `name` column followed by one column per format; the
//! optional column `classical_rank` carries a classical rank from a wider
//! population and is echoed rather than recomputed. JSON input is an array of
//! `{"name": .., "ratings": {label: value, ..}, "classical_rank": ..}`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aggregation::combine;
use crate::alternatives::{arithmetic_mean, power_mean, PowerMeanParameter};
use crate::error::{Error, Result};
use crate::probability::MatchupReport;
use crate::profile::{RatingProfile, WeightVector};

/// Reserved CSV column / JSON key for externally supplied classical ranks.
pub const CLASSICAL_RANK_COLUMN: &str = "classical_rank";
/// Combined ratings closer than this are ordered by name.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidInput(format!(
                "unknown input format `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub name: String,
    pub profile: RatingProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_rank: Option<u32>,
}

pub fn parse_ratings_file(path: &Path, format: Option<InputFormat>) -> Result<Vec<PlayerRecord>> {
    let format = format.unwrap_or_else(|| InputFormat::from_path(path));
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    parse_ratings(BufReader::new(file), format)
}

pub fn parse_ratings<R: Read>(reader: R, format: InputFormat) -> Result<Vec<PlayerRecord>> {
    let records = match format {
        InputFormat::Csv => parse_csv(reader)?,
        InputFormat::Json => parse_json(reader)?,
    };
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.name.as_str()) {
            return Err(Error::Duplicate(r.name.clone()));
        }
    }
    Ok(records)
}

fn parse_csv<R: Read>(reader: R) -> Result<Vec<PlayerRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.get(0) != Some("name") {
        return Err(Error::Parse {
            line: 1,
            message: "first column must be `name`".into(),
        });
    }
    let rank_col = headers.iter().position(|h| h == CLASSICAL_RANK_COLUMN);
    let format_cols: Vec<usize> = (1..headers.len())
        .filter(|&i| Some(i) != rank_col)
        .collect();
    if format_cols.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no format columns".into(),
        });
    }
    let labels: Vec<String> = format_cols.iter().map(|&i| headers[i].to_owned()).collect();

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let parse_err = |message: String| Error::Parse { line, message };
        if row.len() != headers.len() {
            return Err(parse_err(format!(
                "expected {} fields, found {}",
                headers.len(),
                row.len()
            )));
        }
        let name = row[0].to_owned();
        if name.is_empty() {
            return Err(parse_err("empty player name".into()));
        }
        let mut ratings = Vec::with_capacity(format_cols.len());
        for (&col, label) in format_cols.iter().zip(&labels) {
            let value: f64 = row[col].parse().map_err(|_| {
                parse_err(format!("{label} rating `{}` is not a number", &row[col]))
            })?;
            if !value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "line {line}: {label} rating of {name} is not finite"
                )));
            }
            ratings.push(value);
        }
        let classical_rank = match rank_col {
            Some(c) if !row[c].is_empty() => Some(row[c].parse().map_err(|_| {
                parse_err(format!("classical rank `{}` is not an integer", &row[c]))
            })?),
            _ => None,
        };
        out.push(PlayerRecord {
            name,
            profile: RatingProfile::new(labels.clone(), ratings)?,
            classical_rank,
        });
    }
    Ok(out)
}

#[derive(Deserialize, Serialize)]
struct JsonPlayer {
    name: String,
    ratings: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical_rank: Option<u32>,
}

fn parse_json<R: Read>(reader: R) -> Result<Vec<PlayerRecord>> {
    let players: Vec<JsonPlayer> = serde_json::from_reader(reader)?;
    let mut labels: Option<Vec<String>> = None;
    let mut out = Vec::with_capacity(players.len());
    for p in players {
        if p.name.is_empty() {
            return Err(Error::InvalidInput("empty player name".into()));
        }
        let these: Vec<String> = p.ratings.keys().cloned().collect();
        let labels = labels.get_or_insert_with(|| these.clone());
        let mut sorted_a = these.clone();
        let mut sorted_b = labels.clone();
        sorted_a.sort();
        sorted_b.sort();
        if sorted_a != sorted_b {
            return Err(Error::SchemaMismatch(format!(
                "{} has formats {these:?}, expected {labels:?}",
                p.name
            )));
        }
        let mut ratings = Vec::with_capacity(labels.len());
        for label in labels.iter() {
            let value = p.ratings[label].as_f64().ok_or_else(|| {
                Error::InvalidInput(format!("{label} rating of {} is not a number", p.name))
            })?;
            ratings.push(value);
        }
        out.push(PlayerRecord {
            name: p.name,
            profile: RatingProfile::new(labels.clone(), ratings)?,
            classical_rank: p.classical_rank,
        });
    }
    Ok(out)
}

/// Writes records in the same schema [`parse_ratings`] reads.
pub fn write_ratings<W: Write>(
    records: &[PlayerRecord],
    writer: W,
    format: InputFormat,
) -> Result<()> {
    let labels = shared_labels(records)?;
    match format {
        InputFormat::Csv => {
            let with_rank = records.iter().any(|r| r.classical_rank.is_some());
            let mut wtr = csv::Writer::from_writer(writer);
            let mut header = vec!["name".to_owned()];
            header.extend(labels.iter().cloned());
            if with_rank {
                header.push(CLASSICAL_RANK_COLUMN.to_owned());
            }
            wtr.write_record(&header)?;
            for r in records {
                let mut row = vec![r.name.clone()];
                row.extend(r.profile.ratings().iter().map(|v| v.to_string()));
                if with_rank {
                    row.push(r.classical_rank.map(|k| k.to_string()).unwrap_or_default());
                }
                wtr.write_record(&row)?;
            }
            wtr.flush()?;
        }
        InputFormat::Json => {
            let players: Vec<JsonPlayer> = records
                .iter()
                .map(|r| JsonPlayer {
                    name: r.name.clone(),
                    ratings: r
                        .profile
                        .labels()
                        .iter()
                        .cloned()
                        .zip(
                            r.profile
                                .ratings()
                                .iter()
                                .map(|&v| serde_json::Value::from(v)),
                        )
                        .collect(),
                    classical_rank: r.classical_rank,
                })
                .collect();
            serde_json::to_writer_pretty(writer, &players)?;
        }
    }
    Ok(())
}

/// Format labels shared by every record (empty for no records).
fn shared_labels(records: &[PlayerRecord]) -> Result<Vec<String>> {
    let Some(first) = records.first() else {
        return Ok(Vec::new());
    };
    let labels = first.profile.labels();
    for r in records {
        if r.profile.labels() != labels {
            return Err(Error::SchemaMismatch(format!(
                "{} has formats {:?}, expected {:?}",
                r.name,
                r.profile.labels(),
                labels
            )));
        }
    }
    Ok(labels.to_vec())
}

fn check_schema(records: &[PlayerRecord], weights: &WeightVector) -> Result<Vec<String>> {
    let labels = shared_labels(records)?;
    if !records.is_empty() && weights.len() != labels.len() {
        return Err(Error::SchemaMismatch(format!(
            "{} weights for {} formats",
            weights.len(),
            labels.len()
        )));
    }
    Ok(labels)
}

/// Indices sorted by value descending, then name ascending, with values
/// within [`TIE_TOLERANCE`] of each other treated as ties.
fn ranking_order(values: &[f64], names: &[&str]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .total_cmp(&values[a])
            .then_with(|| names[a].cmp(names[b]))
    });
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..order.len() {
            let (a, b) = (order[k - 1], order[k]);
            if (values[a] - values[b]).abs() <= TIE_TOLERANCE && names[b] < names[a] {
                order.swap(k - 1, k);
                swapped = true;
            }
        }
    }
    order
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub combined_rank: usize,
    pub classical_rank: u32,
    pub name: String,
    /// Unrounded combined rating; ordering uses this.
    pub combined: f64,
    /// Combined rating rounded half away from zero.
    pub display: i64,
    pub ratings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaderboard {
    pub formats: Vec<String>,
    pub weights: Vec<f64>,
    pub rows: Vec<LeaderboardRow>,
}

pub fn rank_players(records: &[PlayerRecord], weights: &WeightVector) -> Result<Leaderboard> {
    let formats = check_schema(records, weights)?;
    let names: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
    let combined: Vec<f64> = records
        .iter()
        .map(|r| combine(r.profile.ratings(), weights.as_slice()))
        .collect();

    let first_format: Vec<f64> = records.iter().map(|r| r.profile.ratings()[0]).collect();
    let mut computed_classical = vec![0u32; records.len()];
    for (k, &i) in ranking_order(&first_format, &names).iter().enumerate() {
        computed_classical[i] = k as u32 + 1;
    }

    let rows = ranking_order(&combined, &names)
        .into_iter()
        .enumerate()
        .map(|(k, i)| LeaderboardRow {
            combined_rank: k + 1,
            classical_rank: records[i].classical_rank.unwrap_or(computed_classical[i]),
            name: records[i].name.clone(),
            combined: combined[i],
            display: combined[i].round() as i64,
            ratings: records[i].profile.ratings().to_vec(),
        })
        .collect();
    Ok(Leaderboard {
        formats,
        weights: weights.as_slice().to_vec(),
        rows,
    })
}

impl fmt::Display for Leaderboard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name_w = self
            .rows
            .iter()
            .map(|r| r.name.chars().count())
            .max()
            .unwrap_or(4)
            .max(4);
        write!(
            f,
            "{:>4} {:>9} {:<name_w$} {:>8}",
            "Rank", "Classical", "Name", "Combined"
        )?;
        for label in &self.formats {
            write!(f, " {label:>9}")?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(
                f,
                "{:>4} {:>9} {:<name_w$} {:>8}",
                row.combined_rank, row.classical_rank, row.name, row.display
            )?;
            for r in &row.ratings {
                write!(f, " {:>9}", trim_number(*r))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Integers without a trailing `.0`; everything else as-is.
fn trim_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub arithmetic: f64,
    /// One entry per requested exponent, in request order.
    pub power_means: Vec<f64>,
    pub combined: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub p_values: Vec<f64>,
    pub rows: Vec<ComparisonRow>,
}

/// Arithmetic, power-mean and combined ratings per player, sorted by the
/// combined rating.
pub fn compare_methods(
    records: &[PlayerRecord],
    weights: &WeightVector,
    p_list: &[PowerMeanParameter],
) -> Result<ComparisonTable> {
    check_schema(records, weights)?;
    let w = weights.as_slice();
    let names: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
    let combined: Vec<f64> = records
        .iter()
        .map(|r| combine(r.profile.ratings(), w))
        .collect();
    let rows = ranking_order(&combined, &names)
        .into_iter()
        .map(|i| {
            let r = records[i].profile.ratings();
            ComparisonRow {
                name: records[i].name.clone(),
                arithmetic: arithmetic_mean(r, w),
                power_means: p_list.iter().map(|p| power_mean(r, w, p.value())).collect(),
                combined: combined[i],
            }
        })
        .collect();
    Ok(ComparisonTable {
        p_values: p_list.iter().map(|p| p.value()).collect(),
        rows,
    })
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name_w = self
            .rows
            .iter()
            .map(|r| r.name.chars().count())
            .max()
            .unwrap_or(4)
            .max(4);
        write!(f, "{:<name_w$} {:>10}", "Name", "Arithmetic")?;
        for p in &self.p_values {
            write!(f, " {:>10}", format!("p={p}"))?;
        }
        writeln!(f, " {:>10}", "Combined")?;
        for row in &self.rows {
            write!(f, "{:<name_w$} {:>10.2}", row.name, row.arithmetic)?;
            for v in &row.power_means {
                write!(f, " {v:>10.2}")?;
            }
            writeln!(f, " {:>10.2}", row.combined)?;
        }
        Ok(())
    }
}

/// Builds the matchup report for two players of the same schema.
pub fn matchup_report(
    a: &PlayerRecord,
    b: &PlayerRecord,
    weights: &WeightVector,
    formats: Option<&crate::profile::Distribution>,
) -> Result<MatchupReport> {
    if a.profile.labels() != b.profile.labels() {
        return Err(Error::SchemaMismatch(format!(
            "{} and {} are rated in different formats",
            a.name, b.name
        )));
    }
    MatchupReport::new(&a.profile, &b.profile, weights, formats)
}

/// Human-readable matchup: ratings to 2 decimals, probabilities to 4.
pub fn render_matchup(report: &MatchupReport, name_a: &str, name_b: &str) -> String {
    let mut s = String::new();
    let labels = report.profile_a.labels();
    let _ = writeln!(s, "{name_a} vs {name_b}");
    let _ = writeln!(s, "combined rating A:     {:.2}", report.combined_a);
    let _ = writeln!(s, "combined rating B:     {:.2}", report.combined_b);
    let _ = writeln!(
        s,
        "rating difference:     {:.2}",
        report.rating_difference()
    );
    let _ = writeln!(
        s,
        "combined probability:  {:.4}",
        report.combined_probability
    );
    let _ = writeln!(s, "per-format scores:");
    for ((label, p), w) in labels
        .iter()
        .zip(&report.per_format_scores)
        .zip(&report.endogenous_weights)
    {
        let _ = writeln!(s, "  {label:<12} p = {p:.4}   endogenous weight = {w:.4}");
    }
    if let (Some(l), Some(gap)) = (report.lottery_probability, report.gap()) {
        let _ = writeln!(s, "lottery probability:   {l:.4}");
        let _ = writeln!(s, "combined - lottery:    {gap:.4}");
    }
    s
}
