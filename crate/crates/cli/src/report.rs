//! Regenerates the published tables from data, side by side with the
//! published values.

use std::collections::BTreeMap;
use std::path::Path;

use a2a_channel::published::{
    CONCLUSION_INTERCEPT_DB, CONCLUSION_SIGMA_DB, CONCLUSION_SLOPE_DB_PER_DECADE, TABLE1_CI, TABLE1_FI, TABLE2, TABLE3,
};
use a2a_channel::{
    aggregate_trials, fit_ci, fit_fi, load_csv, rank_all, to_fit_points, BeamScanRecord, FitPoint, FitReport,
    FrequencyGHz, HeightFilter, Measurements, MisalignmentTable, PathLossLaw, PathLossModel, RankFilter, ScanWindow,
};
use anyhow::{bail, Context, Result};

use crate::load_points;
use crate::output::{Cell, Table};

const NEEDS_BEAM_DATA: &str = "requires beam-level data";

fn delta(computed: Option<f64>, published: Option<f64>) -> Cell {
    match (computed, published) {
        (Some(c), Some(p)) => Cell::Num((c - p).abs()),
        _ => Cell::Empty,
    }
}

fn comparison(lead: Vec<Cell>, parameter: &str, computed: Option<f64>, published: Option<f64>) -> Vec<Cell> {
    let mut row = lead;
    row.extend([parameter.into(), computed.into(), published.into(), delta(computed, published)]);
    row
}

fn best_beam_points(path: &Path, height: HeightFilter<f64>) -> Result<Vec<FitPoint<f64>>> {
    let (points, _) = load_points(path)?;
    Ok(to_fit_points(&points, height, RankFilter::Exactly(1))?)
}

pub fn table1(path: &Path, freq: FrequencyGHz<f64>) -> Result<Table> {
    let pts = best_beam_points(path, HeightFilter::All)?;
    let ci = fit_ci(&pts, freq)?.into_dyn();
    let fi = fit_fi(&pts)?.into_dyn();
    let mut t = Table::new(&["fit", "parameter", "computed", "published", "abs_delta"]);
    for (name, report, published) in [("ci", &ci, TABLE1_CI), ("fi", &fi, TABLE1_FI)] {
        let m = &report.model;
        t.push(comparison(vec![name.into()], "intercept_db", Some(m.intercept_db()), Some(published.intercept_db)));
        t.push(comparison(vec![name.into()], "ple", Some(m.ple()), Some(published.ple)));
        t.push(comparison(vec![name.into()], "sigma_db", Some(m.sigma_db()), Some(published.sigma_db)));
        t.push(comparison(vec![name.into()], "mse_db2", Some(report.mse_db2()), None));
    }
    Ok(t)
}

pub fn table2(path: &Path, freq: FrequencyGHz<f64>) -> Result<Table> {
    let (points, _) = load_points(path)?;
    let mut heights: Vec<f64> = points.iter().map(|p| p.height_m).collect();
    heights.sort_by(f64::total_cmp);
    heights.dedup();

    let mut t = Table::new(&["height", "parameter", "computed", "published", "abs_delta"]);
    let groups = std::iter::once(None).chain(heights.into_iter().map(Some));
    for h in groups {
        let filter = h.map_or(HeightFilter::All, HeightFilter::Exactly);
        let report = fit_ci(&to_fit_points(&points, filter, RankFilter::Exactly(1))?, freq)?;
        let published = TABLE2.iter().find(|p| p.height_m == h);
        let label: Cell = h.map_or_else(|| "all".into(), |h| h.to_string().into());
        t.push(comparison(vec![label.clone()], "ple", Some(report.model.ple()), published.map(|p| p.ple)));
        t.push(comparison(vec![label.clone()], "sigma_db", Some(report.model.sigma_db()), published.map(|p| p.sigma_db)));
        t.push(comparison(vec![label], "mse_db2", Some(report.mse_db2()), None));
    }
    Ok(t)
}

struct RankResult {
    report: FitReport<f64>,
    delta_deg: Option<f64>,
}

fn fit_rank(rank: u32, points: &[FitPoint<f64>], freq: FrequencyGHz<f64>) -> Result<FitReport<f64>> {
    Ok(if rank == 1 { fit_ci(points, freq)?.into_dyn() } else { fit_fi(points)?.into_dyn() })
}

/// Per-rank fits from a beam-level raw file, including displacement.
fn ranks_from_raw(path: &Path, freq: FrequencyGHz<f64>) -> Result<Option<BTreeMap<u32, RankResult>>> {
    let Measurements::Raw(raw) = load_csv::<f64, _>(path).with_context(|| format!("loading {}", path.display()))? else {
        return Ok(None);
    };
    let scans = aggregate_trials(&raw).iter().map(BeamScanRecord::try_from).collect::<a2a_channel::Result<Vec<_>>>()?;
    let rankings = rank_all(&scans)?;
    let table = MisalignmentTable::from_rankings(&rankings, freq, ScanWindow::default())?;
    let mut out = BTreeMap::new();
    for e in table.entries() {
        let points: Vec<FitPoint<f64>> = rankings
            .iter()
            .map(|r| FitPoint::new(r.key.distance_m, r.at_rank(e.rank as usize).expect("validated by table").path_loss_db))
            .collect::<a2a_channel::Result<_>>()?;
        let report = fit_rank(e.rank, &points, freq)?;
        debug_assert_eq!(report.model, e.model);
        out.insert(e.rank, RankResult { report, delta_deg: Some(e.delta_deg) });
    }
    Ok(Some(out))
}

fn ranks_from_aggregated(files: &[&Path], freq: FrequencyGHz<f64>) -> Result<BTreeMap<u32, RankResult>> {
    let mut points = Vec::new();
    for f in files {
        points.extend(load_points(f)?.0);
    }
    let mut ranks: Vec<u32> = points.iter().map(|p| p.effective_rank()).collect();
    ranks.sort_unstable();
    ranks.dedup();
    let mut out = BTreeMap::new();
    for rank in ranks.into_iter().filter(|r| (1..=9).contains(r)) {
        let selection = to_fit_points(&points, HeightFilter::All, RankFilter::Exactly(rank))?;
        let report = fit_rank(rank, &selection, freq)?;
        out.insert(rank, RankResult { report, delta_deg: (rank == 1).then_some(0.0) });
    }
    Ok(out)
}

pub fn table3(input: Option<&Path>, data_dir: &Path, freq: FrequencyGHz<f64>) -> Result<Table> {
    let results = match input {
        Some(path) => match ranks_from_raw(path, freq)? {
            Some(r) => r,
            None => ranks_from_aggregated(&[path], freq)?,
        },
        None => {
            let best = data_dir.join("fig2_measurements.csv");
            let rank_files: Vec<_> = (2..=9).map(|r| data_dir.join(format!("fig6_rank{r}.csv"))).collect();
            if !rank_files.iter().any(|p| p.is_file()) {
                let missing: Vec<String> = rank_files.iter().map(|p| p.display().to_string()).collect();
                bail!("no rank fixtures found; missing: {}", missing.join(", "));
            }
            let present: Vec<&Path> =
                std::iter::once(&best).chain(&rank_files).filter(|p| p.is_file()).map(|p| p.as_path()).collect();
            ranks_from_aggregated(&present, freq)?
        }
    };

    let mut t = Table::new(&["rank", "parameter", "computed", "published", "abs_delta", "status"]);
    for published in TABLE3 {
        let result = results.get(&published.rank);
        let lead = || vec![Cell::from(published.rank)];
        let status = |available: bool| Cell::from(if available { "ok" } else { NEEDS_BEAM_DATA });
        let model: Option<&PathLossModel<f64>> = result.map(|r| &r.report.model);
        let rows = [
            ("ple", model.map(|m| m.ple()), Some(published.ple)),
            ("intercept_db", model.map(|m| m.intercept_db()), Some(published.intercept_db)),
            ("sigma_db", model.map(|m| m.sigma_db()), Some(published.sigma_db)),
            ("mse_db2", result.map(|r| r.report.mse_db2()), None),
            ("delta_deg", result.and_then(|r| r.delta_deg), Some(published.delta_deg)),
        ];
        for (name, computed, pubval) in rows {
            let mut row = comparison(lead(), name, computed, pubval);
            row.push(status(computed.is_some()));
            t.push(row);
        }
    }
    Ok(t)
}

pub fn conclusion(path: &Path, freq: FrequencyGHz<f64>) -> Result<Table> {
    let report = fit_ci(&best_beam_points(path, HeightFilter::All)?, freq)?;
    let m = &report.model;
    let mut t = Table::new(&["parameter", "computed", "published", "abs_delta"]);
    t.push(comparison(vec![], "intercept_db", Some(m.intercept_db()), Some(CONCLUSION_INTERCEPT_DB)));
    t.push(comparison(vec![], "slope_db_per_decade", Some(10.0 * m.ple()), Some(CONCLUSION_SLOPE_DB_PER_DECADE)));
    t.push(comparison(vec![], "sigma_db", Some(m.sigma_db()), Some(CONCLUSION_SIGMA_DB)));
    t.push(comparison(vec![], "mse_db2", Some(report.mse_db2()), None));
    Ok(t)
}
