//! Beam-pair ranking, angular displacement and per-rank misalignment laws.
//!
//! At every (distance, height) the sounder sweeps a `W x W` window of TX/RX
//! beams spaced 1.4 degrees apart. Ranking those pairs by path loss gives the
//! best pair (rank 1) and progressively misaligned ones. Fitting each rank
//! across locations turns beamforming-gain loss into an intercept offset.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dataset::{total, AggregatedPoint, PointKey};
use crate::error::{Error, Result};
use crate::fitting::{fit_ci, fit_fi, FitPoint};
use crate::propagation::{CiModel, DistanceM, FiModel, FrequencyGHz, PathLossLaw, PathLossModel};
use crate::published::TABLE3;
use crate::radio::{BEAM_SPACING_DEG, CARRIER_FREQUENCY_GHZ, SCAN_WINDOW};
use crate::scalar::Scalar;

/// Ranks covered by a misalignment table.
pub const MAX_RANK: u32 = 9;

/// Number of beams per side of the scan window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanWindow(pub u16);

impl Default for ScanWindow {
    fn default() -> Self {
        ScanWindow(SCAN_WINDOW as u16)
    }
}

/// Trial-averaged path loss of one beam pair at one location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamScanRecord<T> {
    pub distance_m: T,
    pub height_m: T,
    pub tx_beam_idx: u16,
    pub rx_beam_idx: u16,
    pub path_loss_db: T,
}

impl<T: Scalar> BeamScanRecord<T> {
    pub fn key(&self) -> PointKey<T> {
        PointKey { distance_m: self.distance_m, height_m: self.height_m }
    }
}

impl<T: Scalar> TryFrom<&AggregatedPoint<T>> for BeamScanRecord<T> {
    type Error = Error;

    fn try_from(p: &AggregatedPoint<T>) -> Result<Self> {
        match (p.tx_beam_idx, p.rx_beam_idx) {
            (Some(tx), Some(rx)) => Ok(Self {
                distance_m: p.distance_m,
                height_m: p.height_m,
                tx_beam_idx: tx,
                rx_beam_idx: rx,
                path_loss_db: p.mean_path_loss_db,
            }),
            _ => Err(Error::Validation(format!("point at {} carries no beam indices", p.key()))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedPair<T> {
    pub tx_beam_idx: u16,
    pub rx_beam_idx: u16,
    pub path_loss_db: T,
}

/// Beam pairs at one location, ascending by path loss. `pairs[0]` is rank 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamPairRanking<T> {
    pub key: PointKey<T>,
    pub pairs: Vec<RankedPair<T>>,
}

impl<T> BeamPairRanking<T> {
    /// Pair at 1-based `rank`.
    pub fn at_rank(&self, rank: usize) -> Option<&RankedPair<T>> {
        rank.checked_sub(1).and_then(|i| self.pairs.get(i))
    }
}

/// Orders the beam pairs of one location by path loss.
///
/// Ties are broken by ascending `(tx_beam_idx, rx_beam_idx)`.
pub fn rank_beam_pairs<T: Scalar>(records: &[BeamScanRecord<T>]) -> Result<BeamPairRanking<T>> {
    let first = records
        .first()
        .ok_or_else(|| Error::Validation("cannot rank an empty set of beam pairs".into()))?;
    let key = first.key();
    let mut seen = HashSet::with_capacity(records.len());
    for r in records {
        if r.key() != key {
            return Err(Error::Validation(format!("mixed locations in one ranking: {} and {}", key, r.key())));
        }
        if !seen.insert((r.tx_beam_idx, r.rx_beam_idx)) {
            return Err(Error::Validation(format!(
                "duplicate beam pair ({}, {}) at {}",
                r.tx_beam_idx, r.rx_beam_idx, key
            )));
        }
    }
    let mut pairs: Vec<RankedPair<T>> = records
        .iter()
        .map(|r| RankedPair { tx_beam_idx: r.tx_beam_idx, rx_beam_idx: r.rx_beam_idx, path_loss_db: r.path_loss_db })
        .collect();
    pairs.sort_by(|a, b| {
        total(a.path_loss_db, b.path_loss_db)
            .then(a.tx_beam_idx.cmp(&b.tx_beam_idx))
            .then(a.rx_beam_idx.cmp(&b.rx_beam_idx))
    });
    Ok(BeamPairRanking { key, pairs })
}

/// Groups records by location and ranks each group; output ordered by key.
pub fn rank_all<T: Scalar>(records: &[BeamScanRecord<T>]) -> Result<Vec<BeamPairRanking<T>>> {
    let mut groups: BTreeMap<PointKey<T>, Vec<BeamScanRecord<T>>> = BTreeMap::new();
    for r in records {
        groups.entry(r.key()).or_default().push(*r);
    }
    groups.values().map(|g| rank_beam_pairs(g)).collect()
}

/// Beam pointing angle relative to boresight, degrees. The window is
/// centred on boresight.
pub fn beam_angle<T: Scalar>(beam_idx: u16, window: ScanWindow) -> Result<T> {
    if beam_idx >= window.0 {
        return Err(Error::Domain(format!("beam index {beam_idx} outside scan window [0, {})", window.0)));
    }
    let centre = (T::lit(f64::from(window.0)) - T::one()) / T::lit(2.0);
    Ok((T::lit(f64::from(beam_idx)) - centre) * T::lit(BEAM_SPACING_DEG))
}

/// Mean summed TX + RX angular offset between the best pair and the rank-`rank` pair.
pub fn displacement<T: Scalar>(rankings: &[BeamPairRanking<T>], rank: usize, window: ScanWindow) -> Result<T> {
    if rank == 0 {
        return Err(Error::Domain("ranks start at 1".into()));
    }
    if rankings.is_empty() {
        return Err(Error::Validation("displacement needs at least one ranking".into()));
    }
    if rank == 1 {
        return Ok(T::zero());
    }
    let mut sum = T::zero();
    for r in rankings {
        let best = &r.pairs[0];
        let other = r.at_rank(rank).ok_or_else(|| {
            Error::Validation(format!("ranking at {} has {} pairs, rank {rank} requested", r.key, r.pairs.len()))
        })?;
        let tx = beam_angle::<T>(best.tx_beam_idx, window)? - beam_angle(other.tx_beam_idx, window)?;
        let rx = beam_angle::<T>(best.rx_beam_idx, window)? - beam_angle(other.rx_beam_idx, window)?;
        sum = sum + tx.abs() + rx.abs();
    }
    Ok(sum / T::from_usize(rankings.len()).expect("count fits in scalar"))
}

/// Flattens rankings into rank-labelled points for ranks `1..=max_rank`.
/// Locations with fewer pairs contribute only the ranks they have.
pub fn ranked_points<T: Scalar>(rankings: &[BeamPairRanking<T>], max_rank: u32) -> Vec<AggregatedPoint<T>> {
    let mut out = Vec::new();
    for r in rankings {
        for (i, p) in r.pairs.iter().take(max_rank as usize).enumerate() {
            out.push(AggregatedPoint {
                distance_m: r.key.distance_m,
                height_m: r.key.height_m,
                rank: Some(i as u32 + 1),
                tx_beam_idx: Some(p.tx_beam_idx),
                rx_beam_idx: Some(p.rx_beam_idx),
                mean_path_loss_db: p.path_loss_db,
                trial_count: 1,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisalignmentEntry<T> {
    pub rank: u32,
    pub model: PathLossModel<T>,
    pub delta_deg: T,
}

/// Path-loss law per beam-pair rank 1..=9 plus its angular displacement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisalignmentTable<T> {
    entries: Vec<MisalignmentEntry<T>>,
}

impl<T: Scalar> MisalignmentTable<T> {
    /// Entries must cover ranks 1..=9 in order, rank 1 as a CI law with
    /// zero displacement, all displacements non-negative.
    pub fn new(entries: Vec<MisalignmentEntry<T>>) -> Result<Self> {
        if entries.len() != MAX_RANK as usize {
            return Err(Error::Validation(format!("expected {MAX_RANK} ranks, got {}", entries.len())));
        }
        for (i, e) in entries.iter().enumerate() {
            let expected = i as u32 + 1;
            if e.rank != expected {
                return Err(Error::Validation(format!("entry {i} has rank {}, expected {expected}", e.rank)));
            }
            let is_ci = matches!(e.model, PathLossModel::Ci(_));
            if is_ci != (e.rank == 1) {
                return Err(Error::Validation(format!("rank {} must use the {} law", e.rank, if e.rank == 1 { "CI" } else { "FI" })));
            }
            if e.delta_deg.is_nan() || e.delta_deg < T::zero() || (e.rank == 1 && e.delta_deg != T::zero()) {
                return Err(Error::Validation(format!("invalid displacement {} for rank {}", e.delta_deg, e.rank)));
            }
        }
        Ok(Self { entries })
    }

    /// The published per-rank table.
    pub fn published() -> Self {
        let freq = FrequencyGHz::new(T::lit(CARRIER_FREQUENCY_GHZ)).expect("carrier is positive");
        let entries = TABLE3
            .iter()
            .map(|p| {
                let model = if p.rank == 1 {
                    CiModel::new(freq, T::lit(p.ple), T::lit(p.sigma_db)).map(PathLossModel::from)
                } else {
                    FiModel::new(T::lit(p.intercept_db), T::lit(p.ple), T::lit(p.sigma_db)).map(PathLossModel::from)
                }
                .expect("published values are valid");
                MisalignmentEntry { rank: p.rank, model, delta_deg: T::lit(p.delta_deg) }
            })
            .collect();
        Self::new(entries).expect("published table is well formed")
    }

    /// Fits every rank from beam-level rankings: CI for rank 1, FI above,
    /// pooling all heights.
    pub fn from_rankings(rankings: &[BeamPairRanking<T>], freq: FrequencyGHz<T>, window: ScanWindow) -> Result<Self> {
        let mut entries = Vec::with_capacity(MAX_RANK as usize);
        for rank in 1..=MAX_RANK {
            let points: Vec<FitPoint<T>> = rankings
                .iter()
                .map(|r| {
                    let p = r.at_rank(rank as usize).ok_or_else(|| {
                        Error::Validation(format!("ranking at {} has {} pairs, rank {rank} requested", r.key, r.pairs.len()))
                    })?;
                    FitPoint::new(r.key.distance_m, p.path_loss_db)
                })
                .collect::<Result<_>>()?;
            let model = if rank == 1 {
                PathLossModel::from(fit_ci(&points, freq)?.model)
            } else {
                PathLossModel::from(fit_fi(&points)?.model)
            };
            let delta_deg = displacement(rankings, rank as usize, window)?;
            entries.push(MisalignmentEntry { rank, model, delta_deg });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[MisalignmentEntry<T>] {
        &self.entries
    }

    pub fn entry(&self, rank: u32) -> Result<&MisalignmentEntry<T>> {
        if !(1..=MAX_RANK).contains(&rank) {
            return Err(Error::Domain(format!("rank {rank} outside 1..={MAX_RANK}")));
        }
        Ok(&self.entries[rank as usize - 1])
    }
}

/// Combined path loss and beamforming-gain reduction of the rank-`rank`
/// pair at `d`.
pub fn misalignment_loss<T: Scalar>(table: &MisalignmentTable<T>, rank: u32, d: DistanceM<T>) -> Result<T> {
    table.entry(rank)?.model.mean_pl(d)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn rec(tx: u16, rx: u16, pl: f64) -> BeamScanRecord<f64> {
        BeamScanRecord { distance_m: 6.0, height_m: 12.0, tx_beam_idx: tx, rx_beam_idx: rx, path_loss_db: pl }
    }

    #[test]
    fn ranks_ascending() {
        let r = rank_beam_pairs(&[rec(0, 0, 90.0), rec(1, 1, 88.0)]).unwrap();
        let pls: Vec<f64> = r.pairs.iter().map(|p| p.path_loss_db).collect();
        assert_eq!(pls, vec![88.0, 90.0]);
        let single = rank_beam_pairs(&[rec(3, 4, 91.0)]).unwrap();
        assert_eq!(single.pairs.len(), 1);
        assert_eq!(single.at_rank(1).unwrap().tx_beam_idx, 3);
        assert!(single.at_rank(0).is_none());
    }

    #[test]
    fn ties_break_on_beam_indices() {
        let r = rank_beam_pairs(&[rec(2, 0, 90.0), rec(1, 5, 90.0), rec(1, 3, 90.0)]).unwrap();
        let order: Vec<_> = r.pairs.iter().map(|p| (p.tx_beam_idx, p.rx_beam_idx)).collect();
        assert_eq!(order, vec![(1, 3), (1, 5), (2, 0)]);
    }

    #[test]
    fn ranking_validation() {
        assert!(rank_beam_pairs::<f64>(&[]).is_err());
        assert!(rank_beam_pairs(&[rec(1, 1, 90.0), rec(1, 1, 91.0)]).is_err());
        let mut other = rec(2, 2, 90.0);
        other.distance_m = 9.0;
        assert!(rank_beam_pairs(&[rec(1, 1, 90.0), other]).is_err());
    }

    #[test]
    fn beam_angles() {
        let w = ScanWindow(21);
        assert_abs_diff_eq!(beam_angle::<f64>(10, w).unwrap(), 0.0);
        let w20 = ScanWindow::default();
        assert_abs_diff_eq!(beam_angle::<f64>(0, w20).unwrap(), -13.3, epsilon = 1e-12);
        assert_abs_diff_eq!(beam_angle::<f64>(19, w20).unwrap(), 13.3, epsilon = 1e-12);
        for i in 0..19 {
            let step = beam_angle::<f64>(i + 1, w20).unwrap() - beam_angle::<f64>(i, w20).unwrap();
            assert_abs_diff_eq!(step, 1.4, epsilon = 1e-12);
        }
        assert!(beam_angle::<f64>(20, w20).is_err());
    }

    #[test]
    fn displacement_definitions() {
        let w = ScanWindow::default();
        let r = rank_beam_pairs(&[rec(10, 10, 80.0), rec(11, 10, 81.0), rec(10, 10 + 2, 82.0)]).unwrap();
        let rs = vec![r.clone(), r];
        assert_eq!(displacement(&rs, 1, w).unwrap(), 0.0);
        assert_abs_diff_eq!(displacement(&rs, 2, w).unwrap(), 1.4, epsilon = 1e-12);
        assert_abs_diff_eq!(displacement(&rs, 3, w).unwrap(), 2.8, epsilon = 1e-12);
        assert!(displacement(&rs, 4, w).unwrap_err().to_string().contains("d=6 m"));
        assert!(displacement(&rs, 0, w).is_err());

        let same = rank_beam_pairs(&[rec(4, 4, 80.0), rec(4, 5, 80.5)]).unwrap();
        let best_only = BeamPairRanking { key: same.key, pairs: vec![same.pairs[0], same.pairs[0]] };
        assert_eq!(displacement(&[best_only], 2, w).unwrap(), 0.0);
    }

    #[test]
    fn published_table_losses() {
        let t = MisalignmentTable::<f64>::published();
        let d = |m| DistanceM::new(m).unwrap();
        // 68.080019 + 22.5 log10(6)
        assert_abs_diff_eq!(misalignment_loss(&t, 1, d(6.0)).unwrap(), 85.58843, epsilon = 1e-4);
        assert_abs_diff_eq!(misalignment_loss(&t, 9, d(6.0)).unwrap(), 95.53, epsilon = 0.01);
        // 69.68 + 22.8 log10(40)
        assert_abs_diff_eq!(misalignment_loss(&t, 2, d(40.0)).unwrap(), 106.20697, epsilon = 1e-4);
        assert!(misalignment_loss(&t, 0, d(6.0)).is_err());
        assert!(misalignment_loss(&t, 10, d(6.0)).is_err());
        assert!(misalignment_loss(&t, 3, d(0.5)).is_err());
        assert_eq!(t.entry(1).unwrap().delta_deg, 0.0);
    }

    #[test]
    fn table_validation() {
        let t = MisalignmentTable::<f64>::published();
        let mut entries = t.entries().to_vec();
        entries.swap(0, 1);
        assert!(MisalignmentTable::new(entries).is_err());
        let mut short = t.entries().to_vec();
        short.pop();
        assert!(MisalignmentTable::new(short).is_err());
        let mut neg = t.entries().to_vec();
        neg[4].delta_deg = -1.0;
        assert!(MisalignmentTable::new(neg).is_err());
    }
}
