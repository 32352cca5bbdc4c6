//! Published reference values for the 60 GHz air-to-air campaign.
//!
//! Used for side-by-side delta display and for the built-in misalignment
//! table. Never substituted for values computed from data.

/// Bumped whenever a constant below changes.
pub const PUBLISHED_VALUES_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedFit {
    pub intercept_db: f64,
    pub ple: f64,
    pub sigma_db: f64,
}

/// CI vs FI over all heights.
pub const TABLE1_CI: PublishedFit = PublishedFit { intercept_db: 68.08, ple: 2.25, sigma_db: 3.56 };
pub const TABLE1_FI: PublishedFit = PublishedFit { intercept_db: 67.03, ple: 2.33, sigma_db: 3.52 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedHeightFit {
    /// `None` = all heights pooled.
    pub height_m: Option<f64>,
    pub ple: f64,
    pub sigma_db: f64,
}

/// Per-height CI fits.
pub const TABLE2: [PublishedHeightFit; 4] = [
    PublishedHeightFit { height_m: None, ple: 2.25, sigma_db: 3.56 },
    PublishedHeightFit { height_m: Some(6.0), ple: 2.23, sigma_db: 0.82 },
    PublishedHeightFit { height_m: Some(12.0), ple: 2.25, sigma_db: 2.62 },
    PublishedHeightFit { height_m: Some(15.0), ple: 2.28, sigma_db: 8.06 },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRankFit {
    pub rank: u32,
    pub ple: f64,
    pub intercept_db: f64,
    pub sigma_db: f64,
    pub delta_deg: f64,
}

const fn rank(rank: u32, ple: f64, intercept_db: f64, sigma_db: f64, delta_deg: f64) -> PublishedRankFit {
    PublishedRankFit { rank, ple, intercept_db, sigma_db, delta_deg }
}

/// Per-rank fits: rank 1 is the CI fit of the best beam pair, ranks 2..9
/// are FI fits.
pub const TABLE3: [PublishedRankFit; 9] = [
    rank(1, 2.25, 68.08, 3.56, 0.0),
    rank(2, 2.28, 69.68, 3.78, 1.87),
    rank(3, 2.07, 74.10, 4.85, 2.59),
    rank(4, 1.96, 76.79, 4.61, 2.70),
    rank(5, 2.01, 77.26, 4.01, 3.47),
    rank(6, 1.93, 79.31, 5.76, 3.42),
    rank(7, 1.99, 79.35, 5.80, 4.20),
    rank(8, 2.02, 79.52, 5.38, 3.89),
    rank(9, 2.03, 79.73, 4.82, 4.20),
];

/// Closing model `PL(d) = 68.08 + 22.5 log10(d)`, sigma 3.56 dB.
pub const CONCLUSION_INTERCEPT_DB: f64 = 68.08;
pub const CONCLUSION_SLOPE_DB_PER_DECADE: f64 = 22.5;
pub const CONCLUSION_SIGMA_DB: f64 = 3.56;
