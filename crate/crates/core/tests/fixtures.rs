//! Regression tests against the bundled figure-transcribed fixtures.

mod common;

use std::collections::BTreeMap;

use a2a_channel::*;
use approx::assert_abs_diff_eq;
use common::*;

fn fit_points(file: &str, height: HeightFilter<f64>) -> Vec<FitPoint<f64>> {
    to_fit_points(&aggregated(file), height, RankFilter::All).unwrap()
}

fn d(m: f64) -> DistanceM<f64> {
    DistanceM::new(m).unwrap()
}

#[test]
fn best_beam_fixture_shape() {
    let pts = aggregated("fig2_measurements.csv");
    assert_eq!(pts.len(), 27);
    let mut per_height: BTreeMap<u32, usize> = BTreeMap::new();
    for p in &pts {
        assert_eq!(p.rank, None);
        *per_height.entry(p.height_m as u32).or_default() += 1;
    }
    assert_eq!(per_height, BTreeMap::from([(6, 7), (12, 12), (15, 8)]));
    assert_eq!(fit_points("fig2_measurements.csv", HeightFilter::Exactly(12.0)).len(), 12);
    assert_eq!(fit_points("fig2_measurements.csv", HeightFilter::All).len(), 27);
    assert!(matches!(
        to_fit_points(&pts, HeightFilter::Exactly(99.0), RankFilter::All),
        Err(Error::EmptySelection(_))
    ));
}

#[test]
fn ci_fit_all_heights() {
    let r = fit_ci(&fit_points("fig2_measurements.csv", HeightFilter::All), carrier()).unwrap();
    assert_abs_diff_eq!(r.model.ple(), 2.25, epsilon = 0.01);
    assert_eq!(r.point_count, 27);
    // RMS residual of the 27 markers; the published 3.56 equals its square
    assert_abs_diff_eq!(r.model.sigma_db(), 1.88659, epsilon = 1e-4);
    assert_abs_diff_eq!(r.mse_db2(), 3.56, epsilon = 0.005);
}

#[test]
fn fitted_ci_reproduces_the_plotted_curve() {
    let model = fit_ci(&fit_points("fig2_measurements.csv", HeightFilter::All), carrier()).unwrap().model;
    let rows: Vec<_> = curves("fig5_reference_curves.csv").into_iter().filter(|r| r.0 == "ci_all_heights").collect();
    assert_eq!(rows.len(), 13);
    for (_, dist, expected) in rows {
        assert_abs_diff_eq!(model.mean_pl(d(dist)).unwrap(), expected, epsilon = 1e-6);
    }
}

#[test]
fn fi_fit_all_heights() {
    let r = fit_fi(&fit_points("fig2_measurements.csv", HeightFilter::All)).unwrap();
    assert_abs_diff_eq!(r.model.intercept_db(), 67.03, epsilon = 0.5);
    assert_abs_diff_eq!(r.model.ple(), 2.33, epsilon = 0.03);
    assert_abs_diff_eq!(r.mse_db2(), 3.52, epsilon = 0.005);
    // FI curve sample at 6 m
    assert_abs_diff_eq!(r.model.mean_pl(d(6.0)).unwrap(), 85.1503061774636, epsilon = 1e-6);
    assert_abs_diff_eq!(r.model.mean_pl(d(42.0)).unwrap(), 104.833644169906, epsilon = 1e-6);
}

#[test]
fn per_height_ci_fits() {
    let pts = aggregated("fig2_measurements.csv");
    let keyed = pts.iter().map(|p| (FitPoint::new(p.distance_m, p.mean_path_loss_db).unwrap(), p.height_m as u32));
    let fits = fit_grouped(keyed, ModelKind::Ci, carrier());
    assert_eq!(fits.keys().copied().collect::<Vec<_>>(), vec![6, 12, 15]);
    for r in fits.values() {
        let ple = r.as_ref().unwrap().model.ple();
        assert!((2.2..=2.3).contains(&ple), "{ple}");
    }
    let h12 = fits[&12].as_ref().unwrap();
    assert_abs_diff_eq!(h12.model.ple(), 2.25, epsilon = 0.01);
    // per-height curves at 6 m; the curve labels for 6 m and 15 m are swapped
    // relative to the marker labels
    let at6 = |h: u32| fits[&h].as_ref().unwrap().model.mean_pl(d(6.0)).unwrap();
    assert_abs_diff_eq!(at6(12), 85.609557951523, epsilon = 1e-6);
    assert_abs_diff_eq!(at6(15), 85.4226898283147, epsilon = 1e-6);
    assert_abs_diff_eq!(at6(6), 85.7910476854484, epsilon = 1e-6);
}

#[test]
fn rank_fixture_fits() {
    let expected = [("fig6_rank2.csv", 69.68, 2.28, 0.4, 0.04), ("fig6_rank3.csv", 74.10, 2.07, 0.5, 0.05), ("fig6_rank9.csv", 79.73, 2.03, 0.5, 0.05)];
    for (file, intercept, ple, tol_i, tol_n) in expected {
        let pts = aggregated(file);
        assert_eq!(pts.len(), 27, "{file}");
        let r = fit_fi(&fit_points(file, HeightFilter::All)).unwrap();
        assert_abs_diff_eq!(r.model.intercept_db(), intercept, epsilon = tol_i);
        assert_abs_diff_eq!(r.model.ple(), ple, epsilon = tol_n);
    }
}

#[test]
fn fitted_rank_models_reproduce_the_plotted_curves() {
    let rows = curves("fig7_rank_curves.csv");
    for rank in [2u32, 3, 9] {
        let model = fit_fi(&fit_points(&format!("fig6_rank{rank}.csv"), HeightFilter::All)).unwrap().model;
        for (_, dist, v) in rows.iter().filter(|r| r.0 == rank.to_string()) {
            assert_abs_diff_eq!(model.mean_pl(d(*dist)).unwrap(), *v, epsilon = 1e-6);
        }
    }
}

#[test]
fn published_rank_table_tracks_the_plotted_curves() {
    // two-decimal rounding of (intercept, ple) bounds the error by
    // 0.005 + 0.005 * 10 log10(40) = 0.085 dB
    let table = MisalignmentTable::<f64>::published();
    let rows = curves("fig7_rank_curves.csv");
    assert_eq!(rows.len(), 8 * 14);
    for (rank, dist, v) in rows {
        let got = misalignment_loss(&table, rank.parse().unwrap(), d(dist)).unwrap();
        assert!((got - v).abs() <= 0.085, "rank {rank} at {dist} m: {got} vs {v}");
    }
}

#[test]
fn rank_intercepts_grow_with_rank() {
    let mut keyed = Vec::new();
    for (file, rank) in [("fig2_measurements.csv", 1u32), ("fig6_rank2.csv", 2), ("fig6_rank3.csv", 3), ("fig6_rank9.csv", 9)] {
        for p in aggregated(file) {
            assert_eq!(p.effective_rank(), rank);
            keyed.push((FitPoint::new(p.distance_m, p.mean_path_loss_db).unwrap(), rank));
        }
    }
    let fits = fit_grouped(keyed, ModelKind::Fi, carrier());
    let intercepts: Vec<f64> = fits.values().map(|r| r.as_ref().unwrap().model.intercept_db()).collect();
    assert!(intercepts.windows(2).all(|w| w[0] <= w[1]), "{intercepts:?}");
    assert!((67.0..=69.7).contains(&intercepts[0]));
    assert_abs_diff_eq!(*intercepts.last().unwrap(), 79.7, epsilon = 0.1);
}

#[test]
fn reference_curves_match_the_plot() {
    let rows = curves("fig5_reference_curves.csv");
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (curve, dist, v) in &rows {
        *counts.entry(curve.clone()).or_default() += 1;
        let got = match curve.as_str() {
            "fspl" => {
                assert_abs_diff_eq!(free_space_pl(carrier(), d(*dist)), *v, epsilon = 0.01);
                continue;
            }
            "ci_all_heights" => continue,
            tag => pl_3gpp_los(&ScenarioParams::defaults(tag.parse().unwrap()), carrier(), d(*dist)).unwrap(),
        };
        assert!((got - v).abs() <= 0.05, "{curve} at {dist} m: {got} vs {v}");
    }
    for s in Scenario::ALL {
        assert_eq!(counts[s.tag()], 15);
    }
    assert_eq!(counts["fspl"], 13);
}

#[test]
fn scenario_ordering() {
    let pl = |s: Scenario, m: f64| pl_3gpp_los(&ScenarioParams::defaults(s), carrier(), d(m)).unwrap();
    use Scenario::*;
    assert!(pl(Uma, 6.0) < pl(InOo, 6.0) && pl(InOo, 6.0) < pl(Rma, 6.0) && pl(Rma, 6.0) < pl(UmiStreetCanyon, 6.0));
    let grid: Vec<f64> = (0..=68).map(|i| 6.0 + 0.5 * i as f64).collect();
    for &m in &grid {
        assert!(pl(Uma, m) < pl(Rma, m) && pl(Rma, m) < pl(UmiStreetCanyon, m), "{m}");
        assert!(pl(InOo, m) < pl(Rma, m), "{m}");
        if m >= 9.0 {
            assert!(pl(InOo, m) < pl(Uma, m), "{m}");
        }
    }
    for s in Scenario::ALL {
        assert!(grid.windows(2).all(|w| pl(s, w[0]) < pl(s, w[1])), "{s}");
    }
}

#[test]
fn ci_fit_exceeds_every_3gpp_curve_beyond_9_m() {
    let ci = CiModel::new(carrier(), 2.25, 3.56).unwrap();
    for m in (9..=40).step_by(3).map(f64::from).chain([40.0]) {
        for s in Scenario::ALL {
            let reference = pl_3gpp_los(&ScenarioParams::defaults(s), carrier(), d(m)).unwrap();
            assert!(ci.mean_pl(d(m)).unwrap() > reference, "{s} at {m} m");
        }
    }
}

#[test]
fn misaligned_curves_stay_above_best_beam() {
    let table = MisalignmentTable::<f64>::published();
    for m in (6..=40).map(f64::from) {
        let best = misalignment_loss(&table, 1, d(m)).unwrap();
        for rank in 2..=9 {
            assert!(misalignment_loss(&table, rank, d(m)).unwrap() > best);
        }
    }
}

#[test]
fn aggregated_fixture_round_trips_through_csv() {
    let pts = aggregated("fig6_rank9.csv");
    let mut buf = Vec::new();
    write_aggregated_csv(&mut buf, &pts).unwrap();
    let Measurements::Aggregated(back) = read_csv::<f64, _>(buf.as_slice()).unwrap() else {
        panic!("schema changed");
    };
    assert_eq!(back, pts);
    let best = aggregated("fig2_measurements.csv");
    let mut buf = Vec::new();
    write_aggregated_csv(&mut buf, &best).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("distance_m,height_m,rank,path_loss_db\n6,6,,83.1280544048846\n"), "{text}");
}
