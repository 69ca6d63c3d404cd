#![allow(dead_code)]

use attenuo::*;

pub const CASTOR_C0: f64 = 0.15;

pub fn castor() -> AttenuationModel {
    AttenuationModel::ksb(1.66, 6.0, 1e-4, CASTOR_C0).unwrap()
}

pub fn ksb_fig3() -> AttenuationModel {
    AttenuationModel::ksb(2.0, 1.0, 1e-5, 1.0).unwrap()
}

pub fn nsw_default() -> AttenuationModel {
    AttenuationModel::nsw(1.0, 1.0, vec![Relaxation { kappa: 0.5, tau: 0.01 }]).unwrap()
}

pub fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

pub fn log_radii() -> Vec<f64> {
    (0..25).map(|i| 10f64.powf(-2.0 + 0.25 * i as f64)).collect()
}

pub fn angles() -> Vec<f64> {
    (0..=36).map(|i| std::f64::consts::PI * i as f64 / 36.0).collect()
}
