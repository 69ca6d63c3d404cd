use attenuo_web::demo::*;

const PL15: &str = r#"{"law":"power_law","gamma":1.5,"alpha0":0.0316}"#;
const PL05: &str = r#"{"law":"power_law","gamma":0.5,"alpha0":0.1581}"#;
const CASTOR: &str = r#"{"law":"ksb","gamma":1.66,"alpha0":6,"tau0":1e-4,"c0":0.15}"#;

#[test]
fn kernel_curve_classifies_power_laws() {
    let causal = kernel_curve(PL05, 0.25, 512, 80.0).unwrap();
    assert!(causal.causal);
    assert_eq!(causal.t.len(), 512);
    assert_eq!(causal.k.len(), 512);
    let acausal = kernel_curve(PL15, 0.25, 512, 80.0).unwrap();
    assert!(!acausal.causal);
    assert!(acausal.pre_arrival_fraction > 1e-3);
}

#[test]
fn kernel_curve_has_unit_mass() {
    let k = kernel_curve(CASTOR, 0.5, 1024, 80.0).unwrap();
    let dt = k.t[1] - k.t[0];
    let mass: f64 = k.k.iter().sum::<f64>() * dt;
    assert!((mass - 1.0).abs() < 1e-8, "{mass}");
}

#[test]
fn bad_input_is_reported() {
    assert!(matches!(kernel_curve("{", 0.25, 512, 80.0), Err(DemoError::Json(_))));
    assert!(matches!(
        kernel_curve(r#"{"law":"power_law","gamma":1.5,"alpha0":0.1,"x":1}"#, 0.25, 512, 80.0),
        Err(DemoError::Json(_))
    ));
    assert!(matches!(kernel_curve(PL15, 0.25, 500, 80.0), Err(DemoError::Attenuo(_))));
    assert!(matches!(kernel_curve(PL15, 0.25, 8192, 80.0), Err(DemoError::Input(_))));
    assert!(law_comparison(1.5, 1e-4, 1.0, 60.0, 1).is_err());
}

#[test]
fn law_comparison_agrees_at_low_frequency() {
    let c = law_comparison(1.5, 1e-6, 1.0, 60.0, 601).unwrap();
    assert_eq!(c.omega.len(), 601);
    assert_eq!((c.ksb[0], c.power_law[0]), (0.0, 0.0));
    let rel = (c.ksb[1] - c.power_law[1]).abs() / c.power_law[1];
    assert!(rel < 0.05, "{rel}");
    assert!(c.max_rel_diff < 0.05);
}

#[test]
fn singular_values_are_sorted_and_decay_with_distance() {
    let near = singular_values(CASTOR, 0.15, 0.0, 512, 100.0 * std::f64::consts::PI).unwrap();
    let far = singular_values(CASTOR, 0.15, 4.0, 512, 100.0 * std::f64::consts::PI).unwrap();
    assert!(near.sigma.windows(2).all(|w| w[0] >= w[1]));
    assert!(far.n_cut < near.n_cut, "{} vs {}", far.n_cut, near.n_cut);
}
