//! Measurement ingestion, validation and aggregation.
//!
//! Two canonical CSV schemas are understood (column order is free, extra
//! columns are ignored):
//!
//! ```text
//! raw:        distance_m,height_m,tx_beam_idx,rx_beam_idx,trial_idx,path_loss_db
//! aggregated: distance_m,height_m,rank,path_loss_db
//! ```
//!
//! In the aggregated schema an empty `rank` marks best-beam data and is
//! treated as rank 1 by the rank filter. Row numbers in diagnostics count
//! data rows from 1, header excluded.
//!
//! Adapting another dataset layout means mapping it onto one of these two
//! schemas before calling [`load_csv`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::FitPoint;
use crate::radio::TRIALS_PER_SCAN;
use crate::scalar::Scalar;

pub const RAW_COLUMNS: [&str; 6] = ["distance_m", "height_m", "tx_beam_idx", "rx_beam_idx", "trial_idx", "path_loss_db"];
pub const AGGREGATED_COLUMNS: [&str; 4] = ["distance_m", "height_m", "rank", "path_loss_db"];

/// Tolerance when matching a requested height against stored heights, m.
const HEIGHT_MATCH_TOL_M: f64 = 1e-9;

/// One sounder reading for one beam pair and one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawTrialRecord<T> {
    pub distance_m: T,
    pub height_m: T,
    pub tx_beam_idx: u16,
    pub rx_beam_idx: u16,
    pub trial_idx: u8,
    pub path_loss_db: T,
}

/// Trial-averaged path loss at one (distance, height), optionally tied to a
/// beam pair and/or a rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregatedPoint<T> {
    pub distance_m: T,
    pub height_m: T,
    pub rank: Option<u32>,
    pub tx_beam_idx: Option<u16>,
    pub rx_beam_idx: Option<u16>,
    pub mean_path_loss_db: T,
    /// Number of trials averaged into this point (1 for pre-aggregated input).
    pub trial_count: usize,
}

impl<T: Scalar> AggregatedPoint<T> {
    pub fn key(&self) -> PointKey<T> {
        PointKey { distance_m: self.distance_m, height_m: self.height_m }
    }

    /// Rank with the best-beam convention applied.
    pub fn effective_rank(&self) -> u32 {
        self.rank.unwrap_or(1)
    }
}

/// A measurement location: (distance, height).
///
/// Totally ordered by distance then height; components are always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointKey<T> {
    pub distance_m: T,
    pub height_m: T,
}

impl<T: Scalar> Eq for PointKey<T> {}

impl<T: Scalar> PartialOrd for PointKey<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for PointKey<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        total(self.distance_m, other.distance_m).then(total(self.height_m, other.height_m))
    }
}

impl<T: Scalar> std::fmt::Display for PointKey<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d={} m, h={} m", self.distance_m, self.height_m)
    }
}

pub(crate) fn total<T: Scalar>(a: T, b: T) -> Ordering {
    a.as_f64().total_cmp(&b.as_f64())
}

/// Contents of a CSV file in either canonical schema.
#[derive(Debug, Clone, PartialEq)]
pub enum Measurements<T> {
    Raw(Vec<RawTrialRecord<T>>),
    Aggregated(Vec<AggregatedPoint<T>>),
}

impl<T: Scalar> Measurements<T> {
    pub fn len(&self) -> usize {
        match self {
            Self::Raw(r) => r.len(),
            Self::Aggregated(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Loads a CSV file, detecting the schema from its header.
pub fn load_csv<T: Scalar, P: AsRef<Path>>(path: P) -> Result<Measurements<T>> {
    read_csv(File::open(path)?)
}

/// Like [`load_csv`] but from any reader.
pub fn read_csv<T: Scalar, R: Read>(reader: R) -> Result<Measurements<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);

    let schema: &[&str] = if col("trial_idx").is_some() || col("tx_beam_idx").is_some() {
        &RAW_COLUMNS
    } else {
        &AGGREGATED_COLUMNS
    };
    let mut idx = Vec::with_capacity(schema.len());
    for name in schema {
        match col(name) {
            Some(i) => idx.push(i),
            None => {
                return Err(Error::Parse {
                    row: 0,
                    column: (*name).to_string(),
                    message: "missing column in header".into(),
                })
            }
        }
    }

    if schema.len() == RAW_COLUMNS.len() {
        let mut out = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = RowReader { rec: rec?, row: i + 1 };
            let distance_m = row.positive(idx[0], "distance_m")?;
            let height_m = row.positive(idx[1], "height_m")?;
            let tx_beam_idx = row.index::<u16>(idx[2], "tx_beam_idx")?;
            let rx_beam_idx = row.index::<u16>(idx[3], "rx_beam_idx")?;
            let trial_idx = row.index::<u8>(idx[4], "trial_idx")?;
            if usize::from(trial_idx) >= TRIALS_PER_SCAN {
                return Err(row.error(
                    "trial_idx",
                    format!("trial index {trial_idx} outside 0..{}", TRIALS_PER_SCAN - 1),
                ));
            }
            let path_loss_db = row.finite(idx[5], "path_loss_db")?;
            out.push(RawTrialRecord {
                distance_m: T::lit(distance_m),
                height_m: T::lit(height_m),
                tx_beam_idx,
                rx_beam_idx,
                trial_idx,
                path_loss_db: T::lit(path_loss_db),
            });
        }
        Ok(Measurements::Raw(out))
    } else {
        let mut out = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = RowReader { rec: rec?, row: i + 1 };
            let distance_m = row.positive(idx[0], "distance_m")?;
            let height_m = row.positive(idx[1], "height_m")?;
            let rank = match row.field(idx[2], "rank")? {
                "" => None,
                _ => {
                    let r = row.index::<u32>(idx[2], "rank")?;
                    if r == 0 {
                        return Err(row.error("rank", "rank starts at 1".into()));
                    }
                    Some(r)
                }
            };
            let path_loss_db = row.finite(idx[3], "path_loss_db")?;
            out.push(AggregatedPoint {
                distance_m: T::lit(distance_m),
                height_m: T::lit(height_m),
                rank,
                tx_beam_idx: None,
                rx_beam_idx: None,
                mean_path_loss_db: T::lit(path_loss_db),
                trial_count: 1,
            });
        }
        Ok(Measurements::Aggregated(out))
    }
}

struct RowReader {
    rec: csv::StringRecord,
    row: usize,
}

impl RowReader {
    fn error(&self, column: &str, message: String) -> Error {
        Error::Parse { row: self.row, column: column.to_string(), message }
    }

    fn field(&self, i: usize, column: &str) -> Result<&str> {
        self.rec.get(i).ok_or_else(|| self.error(column, "missing field".into()))
    }

    fn number(&self, i: usize, column: &str) -> Result<f64> {
        let raw = self.field(i, column)?;
        raw.parse::<f64>()
            .map_err(|_| self.error(column, format!("'{raw}' is not a number")))
    }

    fn finite(&self, i: usize, column: &str) -> Result<f64> {
        let v = self.number(i, column)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.error(column, format!("{v} is not finite")))
        }
    }

    fn positive(&self, i: usize, column: &str) -> Result<f64> {
        let v = self.finite(i, column)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.error(column, format!("{v} must be positive")))
        }
    }

    fn index<I: std::str::FromStr>(&self, i: usize, column: &str) -> Result<I> {
        let raw = self.field(i, column)?;
        raw.parse::<I>()
            .map_err(|_| self.error(column, format!("'{raw}' is not a valid non-negative integer index")))
    }
}

/// Writes points in the aggregated schema. Values use the shortest
/// representation that parses back to the identical `f64`.
pub fn write_aggregated_csv<T: Scalar, W: Write>(writer: W, points: &[AggregatedPoint<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(AGGREGATED_COLUMNS)?;
    for p in points {
        let rank = p.rank.map(|r| r.to_string()).unwrap_or_default();
        w.write_record([
            p.distance_m.as_f64().to_string(),
            p.height_m.as_f64().to_string(),
            rank,
            p.mean_path_loss_db.as_f64().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Averages trials per (distance, height, tx beam, rx beam).
///
/// Output is sorted by that key. Trials are summed in sorted order, so the
/// result does not depend on input row order.
pub fn aggregate_trials<T: Scalar>(records: &[RawTrialRecord<T>]) -> Vec<AggregatedPoint<T>> {
    let mut groups: BTreeMap<(PointKey<T>, u16, u16), Vec<T>> = BTreeMap::new();
    for r in records {
        let key = PointKey { distance_m: r.distance_m, height_m: r.height_m };
        groups.entry((key, r.tx_beam_idx, r.rx_beam_idx)).or_default().push(r.path_loss_db);
    }
    groups
        .into_iter()
        .map(|((key, tx, rx), mut values)| {
            values.sort_by(|a, b| total(*a, *b));
            let n = values.len();
            let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
            AggregatedPoint {
                distance_m: key.distance_m,
                height_m: key.height_m,
                rank: None,
                tx_beam_idx: Some(tx),
                rx_beam_idx: Some(rx),
                mean_path_loss_db: sum / T::from_usize(n).expect("count fits in scalar"),
                trial_count: n,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeightFilter<T> {
    All,
    Exactly(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankFilter {
    All,
    Exactly(u32),
}

impl<T: Scalar> HeightFilter<T> {
    fn accepts(&self, h: T) -> bool {
        match *self {
            Self::All => true,
            Self::Exactly(want) => (h - want).abs() <= T::lit(HEIGHT_MATCH_TOL_M),
        }
    }
}

impl RankFilter {
    fn accepts(&self, rank: u32) -> bool {
        match *self {
            Self::All => true,
            Self::Exactly(want) => rank == want,
        }
    }
}

/// Selects points and projects them to (distance, path loss), keeping order.
pub fn to_fit_points<T: Scalar>(
    points: &[AggregatedPoint<T>],
    height: HeightFilter<T>,
    rank: RankFilter,
) -> Result<Vec<FitPoint<T>>> {
    let selected: Vec<FitPoint<T>> = points
        .iter()
        .filter(|p| height.accepts(p.height_m) && rank.accepts(p.effective_rank()))
        .map(|p| FitPoint::new(p.distance_m, p.mean_path_loss_db))
        .collect::<Result<_>>()?;
    if selected.is_empty() {
        let h = match height {
            HeightFilter::All => "all".to_string(),
            HeightFilter::Exactly(h) => format!("{h} m"),
        };
        let r = match rank {
            RankFilter::All => "all".to_string(),
            RankFilter::Exactly(r) => r.to_string(),
        };
        return Err(Error::EmptySelection(format!("no points match height {h}, rank {r}")));
    }
    Ok(selected)
}
