//! Least-squares estimation of CI and FI laws in log-distance.
//!
//! The regressor is `x = 10 log10(d)`, so the fitted slope is the path-loss
//! exponent itself. Shadowing sigma is the RMS of the fit residuals (divisor
//! N, no degrees-of-freedom correction).

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::{
    friis_reference_pl, CiModel, DistanceM, FiModel, FrequencyGHz, ModelKind, PathLossModel,
};
use crate::radio::REFERENCE_DISTANCE_M;
use crate::scalar::Scalar;

/// One measured (distance, path loss) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint<T> {
    distance_m: T,
    path_loss_db: T,
}

impl<T: Scalar> FitPoint<T> {
    pub fn new(distance_m: T, path_loss_db: T) -> Result<Self> {
        DistanceM::new(distance_m)?.beyond_reference()?;
        if !path_loss_db.is_finite() {
            return Err(Error::Domain(format!("path loss must be finite, got {path_loss_db}")));
        }
        Ok(Self { distance_m, path_loss_db })
    }

    pub fn distance_m(&self) -> T {
        self.distance_m
    }

    pub fn path_loss_db(&self) -> T {
        self.path_loss_db
    }

    /// Regressor `10 log10(d)`.
    fn x(&self) -> T {
        T::lit(10.0) * self.distance_m.log10()
    }
}

/// A fitted law with the residuals it leaves on its input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport<T, M = PathLossModel<T>> {
    pub model: M,
    /// `measured - predicted` per input point, in input order.
    pub residuals_db: Vec<T>,
    pub point_count: usize,
}

impl<T: Scalar, M> FitReport<T, M> {
    /// Mean squared residual, dB^2.
    pub fn mse_db2(&self) -> T {
        mean_square(&self.residuals_db)
    }

    /// Sum of squared residuals, dB^2.
    pub fn sse_db2(&self) -> T {
        self.residuals_db.iter().fold(T::zero(), |acc, &r| acc + r * r)
    }
}

impl<T, M: Into<PathLossModel<T>>> FitReport<T, M> {
    pub fn into_dyn(self) -> FitReport<T> {
        FitReport {
            model: self.model.into(),
            residuals_db: self.residuals_db,
            point_count: self.point_count,
        }
    }
}

fn mean_square<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let n = T::from_usize(values.len()).expect("length fits in scalar");
    values.iter().fold(T::zero(), |acc, &r| acc + r * r) / n
}

/// CI fit: least squares through the origin of
/// `PL - FSPL(f, 1 m)` against `10 log10(d)`.
pub fn fit_ci<T: Scalar>(points: &[FitPoint<T>], freq: FrequencyGHz<T>) -> Result<FitReport<T, CiModel<T>>> {
    if points.is_empty() {
        return Err(Error::DegenerateFit("CI fit needs at least one point".into()));
    }
    let intercept = friis_reference_pl(freq);
    let (sxy, sxx) = points.iter().fold((T::zero(), T::zero()), |(sxy, sxx), p| {
        let x = p.x();
        (sxy + x * (p.path_loss_db - intercept), sxx + x * x)
    });
    if sxx <= T::zero() {
        return Err(Error::DegenerateFit(format!(
            "CI fit undefined: every point sits at the {REFERENCE_DISTANCE_M} m reference distance"
        )));
    }
    let ple = sxy / sxx;
    let residuals_db: Vec<T> = points
        .iter()
        .map(|p| p.path_loss_db - intercept - ple * p.x())
        .collect();
    let sigma = mean_square(&residuals_db).sqrt();
    Ok(FitReport {
        model: CiModel::new(freq, ple, sigma)?,
        residuals_db,
        point_count: points.len(),
    })
}

/// FI fit: ordinary least squares of `PL` on `10 log10(d)`.
pub fn fit_fi<T: Scalar>(points: &[FitPoint<T>]) -> Result<FitReport<T, FiModel<T>>> {
    let distinct = points
        .first()
        .map(|first| points.iter().any(|p| p.distance_m != first.distance_m))
        .unwrap_or(false);
    if !distinct {
        return Err(Error::DegenerateFit(format!(
            "FI fit needs at least two distinct distances, got {} point(s)",
            points.len()
        )));
    }
    let n = T::from_usize(points.len()).expect("length fits in scalar");
    let (sx, sy) = points
        .iter()
        .fold((T::zero(), T::zero()), |(sx, sy), p| (sx + p.x(), sy + p.path_loss_db));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((T::zero(), T::zero()), |(sxy, sxx), p| {
        let dx = p.x() - mx;
        (sxy + dx * (p.path_loss_db - my), sxx + dx * dx)
    });
    let ple = sxy / sxx;
    let intercept = my - ple * mx;
    let residuals_db: Vec<T> = points
        .iter()
        .map(|p| p.path_loss_db - intercept - ple * p.x())
        .collect();
    let sigma = mean_square(&residuals_db).sqrt();
    Ok(FitReport {
        model: FiModel::new(intercept, ple, sigma)?,
        residuals_db,
        point_count: points.len(),
    })
}

/// Fits either law. `freq` is only consulted for CI.
pub fn fit<T: Scalar>(points: &[FitPoint<T>], kind: ModelKind, freq: FrequencyGHz<T>) -> Result<FitReport<T>> {
    match kind {
        ModelKind::Ci => fit_ci(points, freq).map(FitReport::into_dyn),
        ModelKind::Fi => fit_fi(points).map(FitReport::into_dyn),
    }
}

/// Per-group fit results, ordered by group key.
pub type GroupedFits<K, T> = BTreeMap<K, Result<FitReport<T>>>;

/// Partitions `points` by key and fits each group independently.
///
/// Points keep their input order inside a group. A failing group is kept in
/// the map as an [`Error::Group`] carrying its key.
pub fn fit_grouped<T, K, I>(points: I, kind: ModelKind, freq: FrequencyGHz<T>) -> GroupedFits<K, T>
where
    T: Scalar,
    K: Ord + Display,
    I: IntoIterator<Item = (FitPoint<T>, K)>,
{
    let mut groups: BTreeMap<K, Vec<FitPoint<T>>> = BTreeMap::new();
    for (point, key) in points {
        groups.entry(key).or_default().push(point);
    }
    groups
        .into_iter()
        .map(|(key, pts)| {
            let result = fit(&pts, kind, freq).map_err(|e| Error::Group {
                group: key.to_string(),
                source: Box::new(e),
            });
            (key, result)
        })
        .collect()
}
