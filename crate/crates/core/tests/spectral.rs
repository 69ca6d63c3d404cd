mod common;

use approx::assert_relative_eq;
use attenuo::*;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn delta(grid: &GridPair, j: usize) -> SampledSignal {
    let mut v = vec![0.0; grid.n];
    v[j] = 1.0 / grid.delta_t;
    SampledSignal::new(*grid, v).unwrap()
}

fn signal_from(grid: GridPair, f: impl Fn(f64) -> f64) -> SampledSignal {
    let v = (0..grid.n).map(|j| f(grid.signed_time(j))).collect();
    SampledSignal::new(grid, v).unwrap()
}

#[test]
fn grid_pair_reciprocity() {
    let g = GridPair::new(8, PI).unwrap();
    assert_relative_eq!(g.delta_omega, 2.0 * PI / 7.0, max_relative = 1e-15);
    assert_relative_eq!(g.delta_t * g.delta_omega * 8.0, 2.0 * PI, max_relative = 1e-15);
    assert_eq!(g.omega(g.zero_index()), 0.0);
}

#[test]
fn paper_grid() {
    let g = GridPair::paper();
    assert_eq!(g.n, 512);
    assert_relative_eq!(g.delta_omega * 511.0, 160.0, max_relative = 1e-14);
    assert_eq!(g.zero_index(), 256);
    assert!(g.omega(0) < -79.9 && g.omega(511) > 79.8);
    assert_relative_eq!(g.window(), 512.0 * g.delta_t, max_relative = 1e-14);
}

#[test]
fn grid_rejects_bad_sizes() {
    assert!(GridPair::new(7, 1.0).is_err());
    assert!(GridPair::new(96, 1.0).is_err());
    assert!(GridPair::new(4, 1.0).is_err());
    assert!(GridPair::new(64, -1.0).is_err());
}

#[test]
fn delta_has_flat_spectrum() {
    let g = GridPair::new(64, 10.0).unwrap();
    let s = forward_fourier(&delta(&g, 0));
    for v in &s.values {
        assert_relative_eq!(v.re, 1.0 / (2.0 * PI).sqrt(), max_relative = 1e-13);
        assert!(v.im.abs() < 1e-13);
    }
}

#[test]
fn flat_spectrum_inverts_to_delta() {
    let g = GridPair::new(64, 10.0).unwrap();
    let spec = SampledSpectrum::hermitian(g, vec![Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0); 64]).unwrap();
    let f = inverse_fourier(&spec).unwrap();
    assert_relative_eq!(f.values[0], 1.0 / g.delta_t, max_relative = 1e-13);
    for v in &f.values[1..] {
        assert!(v.abs() < 1e-12 / g.delta_t);
    }
}

#[test]
fn shifted_delta_is_a_phase() {
    let g = GridPair::new(64, 10.0).unwrap();
    let s = forward_fourier(&delta(&g, 3));
    let t = g.time(3);
    for k in 1..g.n {
        let expect = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), g.omega(k) * t);
        assert!((s.values[k] - expect).norm() < 1e-13, "bin {k}");
    }
}

#[test]
fn even_signal_has_real_spectrum() {
    let g = GridPair::new(128, 20.0).unwrap();
    let f = signal_from(g, |t| (-t * t).exp());
    let s = forward_fourier(&f);
    let max = s.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(s.values.iter().all(|v| v.im.abs() < 1e-13 * max));
}

#[test]
fn cosine_has_two_lines() {
    let g = GridPair::new(128, 20.0).unwrap();
    let m = 5;
    let w = g.omega(g.zero_index() + m);
    let s = forward_fourier(&signal_from(g, |t| (w * t).cos()));
    let peak = s.values[g.zero_index() + m].norm();
    assert_relative_eq!(peak, s.values[g.zero_index() - m].norm(), max_relative = 1e-12);
    for (k, v) in s.values.iter().enumerate() {
        if k != g.zero_index() + m && k != g.zero_index() - m {
            assert!(v.norm() < 1e-12 * peak, "bin {k}");
        }
    }
}

#[test]
fn hilbert_of_constant_vanishes() {
    let g = GridPair::new(64, 10.0).unwrap();
    let h = hilbert(&SampledSignal::new(g, vec![2.5; 64]).unwrap()).unwrap();
    assert!(h.values.iter().all(|v| v.abs() < 1e-13));
}

#[test]
fn hilbert_turns_cosine_into_sine() {
    let g = GridPair::new(128, 20.0).unwrap();
    let w = g.omega(g.zero_index() + 7);
    let h = hilbert(&signal_from(g, |t| (w * t).cos())).unwrap();
    for j in 0..g.n {
        assert_relative_eq!(h.values[j], (w * g.signed_time(j)).sin(), epsilon = 1e-12);
    }
}

#[test]
fn inverse_rejects_non_hermitian_input() {
    let g = GridPair::new(16, 1.0).unwrap();
    let mut v = vec![Complex64::new(0.0, 0.0); 16];
    v[9] = Complex64::new(0.0, 1.0);
    assert!(SampledSpectrum::hermitian(g, v.clone()).is_err());
    let spec = SampledSpectrum::new(g, v).unwrap();
    let (_, residue) = inverse_fourier_with_residue(&spec).unwrap();
    assert!(residue > 1e-8);
}

#[test]
fn kramers_kronig_lossless_is_zero() {
    let r = kramers_kronig_residual(&AttenuationModel::lossless(), &GridPair::paper(), Taper::None).unwrap();
    assert_eq!(r, 0.0);
}

#[test]
fn kramers_kronig_greenleaf_patch_is_order_one() {
    let m = AttenuationModel::greenleaf_patch(2, 0.0316, 1.0).unwrap();
    let r = kramers_kronig_residual(&m, &GridPair::paper(), Taper::None).unwrap();
    assert_relative_eq!(r, 1.0, epsilon = 1e-9);
}

#[test]
fn kramers_kronig_resolved_relaxation_is_small() {
    // dispersion at 1/tau = 1 MHz sits well inside the band
    let m = AttenuationModel::nsw(1.0, 1.0, vec![Relaxation { kappa: 0.5, tau: 1.0 }]).unwrap();
    let r = kramers_kronig_residual(&m, &GridPair::paper(), Taper::None).unwrap();
    assert!(r < 0.05, "residual {r}");
}

#[test]
fn kramers_kronig_ksb_is_small() {
    let r = kramers_kronig_residual(&ksb_fig3(), &GridPair::paper(), Taper::None).unwrap();
    assert!(r < 0.05, "residual {r}");
}

#[test]
fn pre_arrival_of_causal_and_anticausal_signals() {
    let g = GridPair::new(64, 10.0).unwrap();
    assert_eq!(pre_arrival_fraction(&delta(&g, 0), 2), 0.0);
    assert_relative_eq!(pre_arrival_fraction(&delta(&g, 40), 2), 1.0);
    let late = delta(&g, 10);
    assert_relative_eq!(pre_arrival_fraction_after(&late, 12.0 * g.delta_t, 0), 1.0);
    assert_eq!(pre_arrival_fraction_after(&late, 8.0 * g.delta_t, 0), 0.0);
}

#[test]
fn pre_arrival_power_law_half_is_small() {
    let m = AttenuationModel::power_law(0.5, 0.1581).unwrap();
    let rep = causality_report(&m, 0.25, &GridPair::paper(), 2).unwrap();
    assert!(rep.pre_arrival_fraction < 1e-3);
}

fn random_signal(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #[test]
    fn fourier_round_trip(v in random_signal(64)) {
        let g = GridPair::new(64, 10.0).unwrap();
        let f = SampledSignal::new(g, v.clone()).unwrap();
        let back = inverse_fourier(&forward_fourier(&f)).unwrap();
        let err: f64 = back.values.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10);
    }

    #[test]
    fn parseval(v in random_signal(128)) {
        let g = GridPair::new(128, 7.0).unwrap();
        let f = SampledSignal::new(g, v).unwrap();
        let s = forward_fourier(&f);
        let et: f64 = f.values.iter().map(|x| x * x).sum::<f64>() * g.delta_t;
        let ew: f64 = s.values.iter().map(|x| x.norm_sqr()).sum::<f64>() * g.delta_omega;
        prop_assert!((et - ew).abs() <= 1e-10 * et.max(1e-300));
    }

    #[test]
    fn forward_spectrum_is_hermitian(v in random_signal(32)) {
        let g = GridPair::new(32, 3.0).unwrap();
        let s = forward_fourier(&SampledSignal::new(g, v).unwrap());
        prop_assert!(SampledSpectrum::hermitian(g, s.values.clone()).is_ok());
    }

    #[test]
    fn hilbert_twice_negates(v in random_signal(64)) {
        let g = GridPair::new(64, 10.0).unwrap();
        // drop the zero and Nyquist components first
        let mut s = forward_fourier(&SampledSignal::new(g, v).unwrap());
        s.values[0] = Complex64::new(0.0, 0.0);
        s.values[g.zero_index()] = Complex64::new(0.0, 0.0);
        let f = inverse_fourier(&s).unwrap();
        let hh = hilbert(&hilbert(&f).unwrap()).unwrap();
        let err: f64 = hh.values.iter().zip(&f.values).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10);
    }

    #[test]
    fn fourier_is_linear(a in random_signal(32), b in random_signal(32), c in -3.0f64..3.0) {
        let g = GridPair::new(32, 3.0).unwrap();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + c * y).collect();
        let fa = forward_fourier(&SampledSignal::new(g, a).unwrap());
        let fb = forward_fourier(&SampledSignal::new(g, b).unwrap());
        let fs = forward_fourier(&SampledSignal::new(g, sum).unwrap());
        for k in 0..32 {
            prop_assert!((fs.values[k] - fa.values[k] - fb.values[k] * c).norm() <= 1e-12);
        }
    }
}

#[test]
fn rel_l2_helper_is_zero_on_equal_input() {
    assert_eq!(rel_l2(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
}
