mod common;

use approx::assert_relative_eq;
use attenuo::*;
use common::*;

#[test]
fn support_examples() {
    let ph = BallPhantom::new(1.0, 1.0).unwrap();
    let (a, b) = p0_support(&ph, &DetectorGeometry::new(2.0, 1.0).unwrap()).unwrap();
    assert_relative_eq!(a, 1.0);
    assert_relative_eq!(b, 3.0);
    let det = DetectorGeometry::at_surface_distance(&ph, 0.0, CASTOR_C0).unwrap();
    let (a, b) = p0_support(&ph, &det).unwrap();
    assert_eq!(a, 0.0);
    assert_relative_eq!(b, 2.0 / CASTOR_C0, max_relative = 1e-15);
}

#[test]
fn detector_inside_ball_is_rejected() {
    let ph = BallPhantom::new(1.0, 1.0).unwrap();
    assert!(p0_support(&ph, &DetectorGeometry::new(0.5, 1.0).unwrap()).is_err());
    assert!(BallPhantom::new(0.0, 1.0).is_err());
    assert!(DetectorGeometry::new(1.0, -1.0).is_err());
    assert!(DetectorGeometry::at_surface_distance(&ph, -1.0, 1.0).is_err());
}

#[test]
fn n_wave_shape() {
    let ph = BallPhantom::new(1.0, 2.0).unwrap();
    let det = DetectorGeometry::new(2.0, 1.0).unwrap();
    assert_eq!(p0_value(&ph, &det, 2.0).unwrap(), 0.0);
    assert_relative_eq!(p0_value(&ph, &det, 1.5).unwrap(), 2.0 * 0.5 / 4.0, max_relative = 1e-14);
    assert_relative_eq!(p0_value(&ph, &det, 2.5).unwrap(), -2.0 * 0.5 / 4.0, max_relative = 1e-14);
    assert_eq!(p0_value(&ph, &det, 0.5).unwrap(), 0.0);
    assert_eq!(p0_value(&ph, &det, 3.5).unwrap(), 0.0);
    assert_relative_eq!(p0_nodal(&ph, &det, 1.0).unwrap(), 2.0 * 1.0 / 4.0, max_relative = 1e-14);
    assert_relative_eq!(p0_value(&ph, &det, 1.0).unwrap(), 2.0 * 0.5 / 4.0, max_relative = 1e-14);
}

#[test]
fn n_wave_integrates_to_zero() {
    let ph = BallPhantom::new(1.0, 1.0).unwrap();
    let det = DetectorGeometry::new(3.0, 0.15).unwrap();
    let (a, b) = p0_support(&ph, &det).unwrap();
    let n = 2000;
    let h = (b - a) / n as f64;
    let sum: f64 = (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * p0_nodal(&ph, &det, a + i as f64 * h).unwrap()
        })
        .sum::<f64>()
        * h
        / 3.0;
    let scale = ph.amplitude * det.c0 * det.c0 * (b - a);
    assert!(sum.abs() <= 1e-10 * scale, "integral {sum}");
}

#[test]
fn sampled_ball_matches_spherical_mean_oracle() {
    let ph = BallPhantom::new(1.0, 1.0).unwrap();
    let det = DetectorGeometry::new(2.0, 1.0).unwrap();
    let g = GridPair::new(1024, 80.0).unwrap();
    let sampled = p0_ball(&ph, &det, &g).unwrap();
    let oracle: Vec<f64> = (0..g.n).map(|j| p0_oracle(&ph, &det, g.time(j)).unwrap()).collect();
    let err = rel_l2(&sampled.values, &oracle);
    assert!(err <= 1e-3, "relative L2 error {err:.3e}");
}

#[test]
fn sampled_ball_needs_the_support_inside_the_window() {
    let ph = BallPhantom::new(1.0, 1.0).unwrap();
    let det = DetectorGeometry::new(3.0, 0.15).unwrap();
    assert!(p0_ball(&ph, &det, &GridPair::paper()).is_err());
}
