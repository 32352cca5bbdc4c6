//! `a2a`: fit, compare, sample and report 60 GHz air-to-air path-loss models.

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use a2a_channel::published::TABLE1_CI;
use a2a_channel::published::TABLE1_FI;
use a2a_channel::radio::CARRIER_FREQUENCY_GHZ;
use a2a_channel::{
    aggregate_trials, fit, free_space_pl, load_csv, pl_3gpp_los, rank_all, ranked_points, sample_pl,
    to_fit_points, AggregatedPoint, BeamScanRecord, CiModel, DistanceM, FiModel, FrequencyGHz, HeightFilter,
    Measurements, ModelKind, PathLossLaw, PathLossModel, RankFilter, RngSeed, Scenario, ScenarioParams,
};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::output::{Cell, OutputFormat, Table};

/// Environment variable overriding the fixture directory.
pub const DATA_DIR_ENV: &str = "A2A_DATA_DIR";

#[derive(Debug, Parser)]
#[command(name = "a2a", version, about = "60 GHz air-to-air path-loss toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Ci,
    Fi,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ci => ModelKind::Ci,
            ModelArg::Fi => ModelKind::Fi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Table1,
    Table2,
    Table3,
    Conclusion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a CI or FI law to measurements.
    Fit {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        input: PathBuf,
        /// Height in meters, or `all`.
        #[arg(long, default_value = "all")]
        height: String,
        /// Beam-pair rank, or `all`. Defaults to `all` for aggregated files
        /// and `1` (best beam) for raw beam-level files.
        #[arg(long)]
        rank: Option<String>,
        #[arg(long, default_value_t = CARRIER_FREQUENCY_GHZ)]
        freq_ghz: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Tabulate the published CI law against 3GPP LOS curves and free space.
    Compare {
        /// Inclusive range `START:STOP:STEP` in meters.
        #[arg(long, default_value = "6:40:1")]
        distances: String,
        #[arg(long, default_value_t = CARRIER_FREQUENCY_GHZ)]
        freq_ghz: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Draw shadowed path-loss samples at one distance.
    Sample {
        #[arg(long)]
        distance: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "ci")]
        model: ModelArg,
        /// Path-loss exponent; defaults to the published all-heights fit.
        #[arg(long)]
        ple: Option<f64>,
        /// FI intercept in dB; ignored for CI.
        #[arg(long)]
        intercept_db: Option<f64>,
        #[arg(long)]
        sigma_db: Option<f64>,
        #[arg(long, default_value_t = CARRIER_FREQUENCY_GHZ)]
        freq_ghz: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Regenerate a published table from data, with deltas.
    Report {
        #[arg(long, value_enum)]
        which: Which,
        /// Measurement file; defaults to the bundled fixtures.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = CARRIER_FREQUENCY_GHZ)]
        freq_ghz: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
}

/// Bad flag values detected after clap parsing; exit code 2 like clap's own.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "usage error: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Fit { model, input, height, rank, freq_ghz, format } => {
            cmd_fit(model.into(), &input, &height, rank.as_deref(), freq_ghz, format)
        }
        Command::Compare { distances, freq_ghz, format } => cmd_compare(&distances, freq_ghz, format),
        Command::Sample { distance, n, seed, model, ple, intercept_db, sigma_db, freq_ghz, format } => {
            let model = sample_model(model, ple, intercept_db, sigma_db, freq_ghz)?;
            cmd_sample(&model, distance, n, seed, format)
        }
        Command::Report { which, input, freq_ghz, format } => {
            let freq = frequency(freq_ghz)?;
            let table = match which {
                Which::Table1 => report::table1(&input_or_fixture(input.as_deref())?, freq)?,
                Which::Table2 => report::table2(&input_or_fixture(input.as_deref())?, freq)?,
                Which::Table3 => report::table3(input.as_deref(), &data_dir(), freq)?,
                Which::Conclusion => report::conclusion(&input_or_fixture(input.as_deref())?, freq)?,
            };
            Ok(table.render(format))
        }
    }
}

fn frequency(ghz: f64) -> Result<FrequencyGHz<f64>> {
    FrequencyGHz::new(ghz).map_err(|e| UsageError(e.to_string()).into())
}

/// Fixture directory: `$A2A_DATA_DIR`, else `./data`, else the repository copy.
pub fn data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("data");
    if local.is_dir() {
        return local;
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn input_or_fixture(input: Option<&Path>) -> Result<PathBuf> {
    Ok(match input {
        Some(p) => p.to_path_buf(),
        None => data_dir().join("fig2_measurements.csv"),
    })
}

/// Loads a file and returns rank-labelled points. Raw beam-level files are
/// trial-averaged and ranked first (ranks 1..=9 kept).
pub fn load_points(path: &Path) -> Result<(Vec<AggregatedPoint<f64>>, bool)> {
    let m = load_csv::<f64, _>(path).with_context(|| format!("loading {}", path.display()))?;
    match m {
        Measurements::Aggregated(p) => Ok((p, false)),
        Measurements::Raw(raw) => {
            let scans = aggregate_trials(&raw)
                .iter()
                .map(BeamScanRecord::try_from)
                .collect::<a2a_channel::Result<Vec<_>>>()?;
            let rankings = rank_all(&scans)?;
            Ok((ranked_points(&rankings, a2a_channel::beam::MAX_RANK), true))
        }
    }
}

fn parse_height(s: &str) -> Result<HeightFilter<f64>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(HeightFilter::All);
    }
    let h: f64 = s.parse().map_err(|_| UsageError(format!("--height expects a number or 'all', got '{s}'")))?;
    Ok(HeightFilter::Exactly(h))
}

fn parse_rank(s: &str) -> Result<RankFilter> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(RankFilter::All);
    }
    let r: u32 = s.parse().map_err(|_| UsageError(format!("--rank expects a positive integer or 'all', got '{s}'")))?;
    if r == 0 {
        bail!(UsageError("--rank starts at 1".into()));
    }
    Ok(RankFilter::Exactly(r))
}

fn cmd_fit(kind: ModelKind, input: &Path, height: &str, rank: Option<&str>, freq_ghz: f64, format: OutputFormat) -> Result<String> {
    let freq = frequency(freq_ghz)?;
    let height = parse_height(height)?;
    let (points, raw) = load_points(input)?;
    let rank = match rank {
        Some(r) => parse_rank(r)?,
        None if raw => RankFilter::Exactly(1),
        None => RankFilter::All,
    };
    let selection = to_fit_points(&points, height, rank)?;
    let report = fit(&selection, kind, freq)?;
    let mut table = Table::new(&["model", "intercept_db", "ple", "sigma_db", "mse_db2", "point_count"]);
    table.push(vec![
        model_tag(&report.model).into(),
        report.model.intercept_db().into(),
        report.model.ple().into(),
        report.model.sigma_db().into(),
        report.mse_db2().into(),
        report.point_count.into(),
    ]);
    Ok(table.render(format))
}

fn model_tag(m: &PathLossModel<f64>) -> &'static str {
    match m.kind() {
        ModelKind::Ci => "ci",
        ModelKind::Fi => "fi",
    }
}

/// Parses `START:STOP:STEP` into the inclusive grid of distances.
pub fn parse_range(range: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        bail!(UsageError(format!("--distances expects START:STOP:STEP, got '{range}'")));
    };
    let num = |s: &str, what: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| UsageError(format!("{what} '{s}' is not a finite number")).into())
    };
    let (start, stop, step) = (num(start, "START")?, num(stop, "STOP")?, num(step, "STEP")?);
    if step <= 0.0 {
        bail!(UsageError(format!("STEP must be positive, got {step}")));
    }
    if start < 1.0 {
        bail!(UsageError(format!("START must be at least the 1 m reference distance, got {start}")));
    }
    if stop < start {
        bail!(UsageError(format!("STOP {stop} is below START {start}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn cmd_compare(distances: &str, freq_ghz: f64, format: OutputFormat) -> Result<String> {
    let freq = frequency(freq_ghz)?;
    let grid = parse_range(distances)?;
    let ci = CiModel::new(freq, TABLE1_CI.ple, TABLE1_CI.sigma_db)?;
    let mut table = Table::new(&["distance_m", "ci", "umi", "uma", "rma", "inoo", "fspl"]);
    for d in grid {
        let dist = DistanceM::new(d)?;
        let mut row: Vec<Cell> = vec![d.into(), ci.mean_pl(dist)?.into()];
        for s in Scenario::ALL {
            row.push(pl_3gpp_los(&ScenarioParams::defaults(s), freq, dist)?.into());
        }
        row.push(free_space_pl(freq, dist).into());
        table.push(row);
    }
    Ok(table.render(format))
}

fn sample_model(
    model: ModelArg,
    ple: Option<f64>,
    intercept_db: Option<f64>,
    sigma_db: Option<f64>,
    freq_ghz: f64,
) -> Result<PathLossModel<f64>> {
    Ok(match model {
        ModelArg::Ci => CiModel::new(
            frequency(freq_ghz)?,
            ple.unwrap_or(TABLE1_CI.ple),
            sigma_db.unwrap_or(TABLE1_CI.sigma_db),
        )?
        .into(),
        ModelArg::Fi => FiModel::new(
            intercept_db.unwrap_or(TABLE1_FI.intercept_db),
            ple.unwrap_or(TABLE1_FI.ple),
            sigma_db.unwrap_or(TABLE1_FI.sigma_db),
        )?
        .into(),
    })
}

fn cmd_sample(model: &PathLossModel<f64>, distance: f64, n: usize, seed: u64, format: OutputFormat) -> Result<String> {
    let d = DistanceM::new(distance)?;
    let samples = sample_pl(model, d, n, RngSeed(seed))?;
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&samples)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => samples.iter().map(|v| format!("{v}\n")).collect(),
        OutputFormat::Markdown => samples.iter().map(|v| format!("{v:.2}\n")).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("6:12:3").unwrap(), vec![6.0, 9.0, 12.0]);
        assert_eq!(parse_range("6:7:2").unwrap(), vec![6.0]);
        assert_eq!(parse_range("6:40:34").unwrap(), vec![6.0, 40.0]);
        assert_eq!(parse_range("6:6.3:0.1").unwrap().len(), 4);
        for bad in ["6:40:0", "6:40:-1", "0.5:40:1", "40:6:1", "6:40", "a:b:c", "6:40:inf"] {
            let e = parse_range(bad).unwrap_err();
            assert!(e.downcast_ref::<UsageError>().is_some(), "{bad}");
        }
    }

    #[test]
    fn filters() {
        assert_eq!(parse_height("ALL").unwrap(), HeightFilter::All);
        assert_eq!(parse_height("12").unwrap(), HeightFilter::Exactly(12.0));
        assert!(parse_height("tall").is_err());
        assert_eq!(parse_rank("3").unwrap(), RankFilter::Exactly(3));
        assert!(parse_rank("0").is_err());
    }
}
