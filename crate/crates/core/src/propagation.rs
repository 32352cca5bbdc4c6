//! Closed-form path-loss laws and shadow-fading sampling.
//!
//! Two single-frequency laws are supported:
//!
//! * close-in (CI): `PL(d) = FSPL(f, 1 m) + 10 n log10(d) + X`, the intercept
//!   pinned to free-space loss at the 1 m reference distance;
//! * floating intercept (FI): `PL(d) = PL_FI + 10 n log10(d) + X`, where the
//!   intercept stands for `beta + 10 gamma log10(f)` of the ABG law.
//!
//! `X` is zero-mean Gaussian shadow fading in dB with standard deviation
//! `sigma_db`. All path losses are in dB.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radio::{REFERENCE_DISTANCE_M, SPEED_OF_LIGHT_M_S};
use crate::scalar::Scalar;

/// Carrier frequency in GHz. Always strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FrequencyGHz<T>(T);

impl<T: Scalar> FrequencyGHz<T> {
    pub fn new(ghz: T) -> Result<Self> {
        if ghz.is_finite() && ghz > T::zero() {
            Ok(Self(ghz))
        } else {
            Err(Error::Domain(format!("frequency must be positive and finite, got {ghz} GHz")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn hz(self) -> T {
        self.0 * T::lit(1e9)
    }
}

/// 3D TX-RX separation in meters. Always strictly positive and finite.
///
/// The CI/FI laws additionally require `>= 1 m`; that check happens at
/// evaluation time so the same type can feed the free-space law.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DistanceM<T>(T);

impl<T: Scalar> DistanceM<T> {
    pub fn new(meters: T) -> Result<Self> {
        if meters.is_finite() && meters > T::zero() {
            Ok(Self(meters))
        } else {
            Err(Error::Domain(format!("distance must be positive and finite, got {meters} m")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Returns the distance if it is at or beyond the 1 m reference distance.
    pub fn beyond_reference(self) -> Result<T> {
        if self.0 >= T::lit(REFERENCE_DISTANCE_M) {
            Ok(self.0)
        } else {
            Err(Error::BelowReferenceDistance { distance_m: self.0.as_f64() })
        }
    }
}

/// Seed for the shadow-fading generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// ChaCha20 stream keyed by this seed. Output is stable across platforms.
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }
}

/// Free-space loss at the 1 m reference distance, `20 log10(4 pi f / c)`.
pub fn friis_reference_pl<T: Scalar>(freq: FrequencyGHz<T>) -> T {
    let c = T::lit(SPEED_OF_LIGHT_M_S);
    T::lit(20.0) * (T::lit(4.0) * T::PI() * freq.hz() / c).log10()
}

/// Free-space (Friis) path loss at distance `d`. No atmospheric term.
pub fn free_space_pl<T: Scalar>(freq: FrequencyGHz<T>, d: DistanceM<T>) -> T {
    friis_reference_pl(freq) + T::lit(20.0) * d.value().log10()
}

/// A single-slope log-distance law with Gaussian shadowing.
pub trait PathLossLaw<T: Scalar> {
    /// Path loss at the 1 m reference distance, dB.
    fn intercept_db(&self) -> T;

    /// Path-loss exponent.
    fn ple(&self) -> T;

    /// Shadow-fading standard deviation, dB.
    fn sigma_db(&self) -> T;

    /// Deterministic part of the law at `d` (shadowing excluded).
    fn mean_pl(&self, d: DistanceM<T>) -> Result<T> {
        let d = d.beyond_reference()?;
        Ok(self.intercept_db() + T::lit(10.0) * self.ple() * d.log10())
    }
}

fn check_ple_sigma<T: Scalar>(ple: T, sigma_db: T) -> Result<()> {
    if !ple.is_finite() {
        return Err(Error::Domain(format!("path-loss exponent must be finite, got {ple}")));
    }
    if !(sigma_db.is_finite() && sigma_db >= T::zero()) {
        return Err(Error::Domain(format!("sigma must be finite and >= 0, got {sigma_db} dB")));
    }
    Ok(())
}

/// Close-in law. The intercept is never stored; it follows from `freq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiModel<T> {
    freq: FrequencyGHz<T>,
    ple: T,
    sigma_db: T,
}

impl<T: Scalar> CiModel<T> {
    pub fn new(freq: FrequencyGHz<T>, ple: T, sigma_db: T) -> Result<Self> {
        check_ple_sigma(ple, sigma_db)?;
        Ok(Self { freq, ple, sigma_db })
    }

    pub fn freq(&self) -> FrequencyGHz<T> {
        self.freq
    }
}

impl<T: Scalar> PathLossLaw<T> for CiModel<T> {
    fn intercept_db(&self) -> T {
        friis_reference_pl(self.freq)
    }

    fn ple(&self) -> T {
        self.ple
    }

    fn sigma_db(&self) -> T {
        self.sigma_db
    }
}

/// Floating-intercept law (single-frequency ABG).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiModel<T> {
    intercept_db: T,
    ple: T,
    sigma_db: T,
}

impl<T: Scalar> FiModel<T> {
    pub fn new(intercept_db: T, ple: T, sigma_db: T) -> Result<Self> {
        if !intercept_db.is_finite() {
            return Err(Error::Domain(format!("intercept must be finite, got {intercept_db} dB")));
        }
        check_ple_sigma(ple, sigma_db)?;
        Ok(Self { intercept_db, ple, sigma_db })
    }
}

impl<T: Scalar> PathLossLaw<T> for FiModel<T> {
    fn intercept_db(&self) -> T {
        self.intercept_db
    }

    fn ple(&self) -> T {
        self.ple
    }

    fn sigma_db(&self) -> T {
        self.sigma_db
    }
}

/// Which law to fit or evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ci,
    Fi,
}

/// Either law, for code paths that pick the family at run time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathLossModel<T> {
    Ci(CiModel<T>),
    Fi(FiModel<T>),
}

impl<T> PathLossModel<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Ci(_) => ModelKind::Ci,
            Self::Fi(_) => ModelKind::Fi,
        }
    }
}

impl<T: Scalar> PathLossLaw<T> for PathLossModel<T> {
    fn intercept_db(&self) -> T {
        match self {
            Self::Ci(m) => m.intercept_db(),
            Self::Fi(m) => m.intercept_db(),
        }
    }

    fn ple(&self) -> T {
        match self {
            Self::Ci(m) => m.ple(),
            Self::Fi(m) => m.ple(),
        }
    }

    fn sigma_db(&self) -> T {
        match self {
            Self::Ci(m) => m.sigma_db(),
            Self::Fi(m) => m.sigma_db(),
        }
    }
}

impl<T> From<CiModel<T>> for PathLossModel<T> {
    fn from(m: CiModel<T>) -> Self {
        Self::Ci(m)
    }
}

impl<T> From<FiModel<T>> for PathLossModel<T> {
    fn from(m: FiModel<T>) -> Self {
        Self::Fi(m)
    }
}

/// Draws `n` shadowed path-loss values at `d`: `mean_pl(d) + sigma * z_k`
/// with `z_k` i.i.d. standard normal from a ChaCha20 stream keyed by `seed`.
pub fn sample_pl<T, M>(model: &M, d: DistanceM<T>, n: usize, seed: RngSeed) -> Result<Vec<T>>
where
    T: Scalar,
    M: PathLossLaw<T> + ?Sized,
    StandardNormal: Distribution<T>,
{
    let mean = model.mean_pl(d)?;
    let sigma = model.sigma_db();
    let mut rng = seed.rng();
    Ok((0..n)
        .map(|_| {
            let z: T = rng.sample(StandardNormal);
            mean + sigma * z
        })
        .collect())
}
