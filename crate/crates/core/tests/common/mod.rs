#![allow(dead_code)]

use std::path::PathBuf;

use a2a_channel::{load_csv, AggregatedPoint, FrequencyGHz, Measurements};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn carrier() -> FrequencyGHz<f64> {
    FrequencyGHz::new(60.48).unwrap()
}

pub fn aggregated(name: &str) -> Vec<AggregatedPoint<f64>> {
    match load_csv(data_dir().join(name)).unwrap() {
        Measurements::Aggregated(p) => p,
        Measurements::Raw(_) => panic!("{name} should use the aggregated schema"),
    }
}

/// `(curve, distance, value)` rows of a two- or three-column curve file.
pub fn curves(name: &str) -> Vec<(String, f64, f64)> {
    let mut rdr = csv::Reader::from_path(data_dir().join(name)).unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect()
}
