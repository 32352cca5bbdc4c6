//! Path-loss modelling for 60 GHz air-to-air (UAV-to-UAV) links.
//!
//! * [`propagation`]: CI, FI and free-space laws, shadow-fading sampling.
//! * [`fitting`]: least-squares CI/FI estimation from measurements.
//! * [`reference_models`]: 3GPP TR 38.901 LOS curves with oxygen absorption.
//! * [`beam`]: beam-pair ranking, displacement and misalignment tables.
//! * [`dataset`]: CSV ingestion and trial aggregation.
//!
//! Every model is generic over the scalar type (`f32` or `f64`); the `*F64`
//! aliases below are what most callers want.

pub mod beam;
pub mod dataset;
pub mod error;
pub mod fitting;
pub mod propagation;
pub mod published;
pub mod radio;
pub mod reference_models;
pub mod scalar;

pub use beam::{
    beam_angle, displacement, misalignment_loss, rank_all, rank_beam_pairs, ranked_points, BeamPairRanking,
    BeamScanRecord, MisalignmentEntry, MisalignmentTable, RankedPair, ScanWindow,
};
pub use dataset::{
    aggregate_trials, load_csv, read_csv, to_fit_points, write_aggregated_csv, AggregatedPoint, HeightFilter,
    Measurements, PointKey, RankFilter, RawTrialRecord,
};
pub use error::{Error, Result};
pub use fitting::{fit, fit_ci, fit_fi, fit_grouped, FitPoint, FitReport, GroupedFits};
pub use propagation::{
    free_space_pl, friis_reference_pl, sample_pl, CiModel, DistanceM, FiModel, FrequencyGHz, ModelKind,
    PathLossLaw, PathLossModel, RngSeed,
};
pub use reference_models::{oxygen_loss, pl_3gpp_los, Scenario, ScenarioParams};
pub use scalar::Scalar;

pub type FrequencyGHzF64 = FrequencyGHz<f64>;
pub type DistanceMF64 = DistanceM<f64>;
pub type CiModelF64 = CiModel<f64>;
pub type FiModelF64 = FiModel<f64>;
pub type PathLossModelF64 = PathLossModel<f64>;
pub type FitPointF64 = FitPoint<f64>;
pub type FitReportF64 = FitReport<f64>;
pub type ScenarioParamsF64 = ScenarioParams<f64>;
pub type AggregatedPointF64 = AggregatedPoint<f64>;
pub type MisalignmentTableF64 = MisalignmentTable<f64>;

pub type FrequencyGHzF32 = FrequencyGHz<f32>;
pub type DistanceMF32 = DistanceM<f32>;
pub type CiModelF32 = CiModel<f32>;
pub type FiModelF32 = FiModel<f32>;
pub type FitPointF32 = FitPoint<f32>;
