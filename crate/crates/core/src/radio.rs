//! Radio constants of the 60 GHz sounder campaign.
//!
//! Only the carrier frequency and beam geometry feed the models; the
//! remaining constants are documentation for link-budget work.

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Carrier frequency of the measurement channel, GHz.
pub const CARRIER_FREQUENCY_GHZ: f64 = 60.48;

/// Channel bandwidth, GHz.
pub const BANDWIDTH_GHZ: f64 = 2.16;

/// Maximum effective radiated power, dBm.
pub const MAX_ERP_DBM: f64 = 45.0;

/// Angular spacing between adjacent codebook beams, degrees.
pub const BEAM_SPACING_DEG: f64 = 1.4;

/// Beam pairs swept per scan (20 TX beams x 20 RX beams).
pub const SCAN_BEAM_PAIRS: usize = 400;

/// Beams per side in the scan window.
pub const SCAN_WINDOW: usize = 20;

/// Independent measurements averaged per beam scan.
pub const TRIALS_PER_SCAN: usize = 15;

/// Reference distance of the CI and FI laws, m.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;
