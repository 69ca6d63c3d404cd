//! Native implementations behind the browser bindings.

use std::f64::consts::PI;
use std::fmt;

use attenuo::{
    attenuation_law, build_matrix, causality_report, default_n_cells, kernel_k, p0_support,
    svd_analyze, AttenuationModel, BallPhantom, CausalityVerdict, DetectorGeometry, GridPair, Law,
};

/// Guard band in samples for the causality verdict.
pub const GUARD: usize = 2;
/// Largest grid the page will request; keeps the SVD interactive.
pub const MAX_N: usize = 4096;

#[derive(Debug)]
pub enum DemoError {
    Json(serde_json::Error),
    Attenuo(attenuo::Error),
    Input(String),
}

impl fmt::Display for DemoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemoError::Json(e) => write!(f, "invalid law JSON: {e}"),
            DemoError::Attenuo(e) => write!(f, "{e}"),
            DemoError::Input(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for DemoError {}

impl From<attenuo::Error> for DemoError {
    fn from(e: attenuo::Error) -> Self {
        DemoError::Attenuo(e)
    }
}

pub type Result<T> = std::result::Result<T, DemoError>;

pub fn parse_law(law_json: &str) -> Result<AttenuationModel> {
    let law: Law = serde_json::from_str(law_json).map_err(DemoError::Json)?;
    Ok(AttenuationModel::new(law)?)
}

fn grid(n: usize, omega_max: f64) -> Result<GridPair> {
    if n > MAX_N {
        return Err(DemoError::Input(format!("grid size {n} exceeds {MAX_N}")));
    }
    Ok(GridPair::new(n, omega_max)?)
}

pub struct KernelCurve {
    pub law: &'static str,
    pub t: Vec<f64>,
    pub k: Vec<f64>,
    pub pre_arrival_fraction: f64,
    pub causal: bool,
}

pub fn kernel_curve(law_json: &str, r: f64, n: usize, omega_max: f64) -> Result<KernelCurve> {
    let model = parse_law(law_json)?;
    let g = grid(n, omega_max)?;
    let k = kernel_k(&model, r, &g)?;
    let rep = causality_report(&model, r, &g, GUARD)?;
    Ok(KernelCurve {
        law: model.name(),
        t: (0..g.n).map(|j| g.time(j)).collect(),
        k: k.signal.values,
        pre_arrival_fraction: rep.pre_arrival_fraction,
        causal: rep.verdict == CausalityVerdict::Causal,
    })
}

pub struct LawComparison {
    pub alpha0: f64,
    pub omega: Vec<f64>,
    pub ksb: Vec<f64>,
    pub power_law: Vec<f64>,
    pub max_rel_diff: f64,
}

/// KSB with `alpha0 = 2 c0 tau0 / |cos(pi gamma / 2)|`, which makes its
/// low-frequency asymptote exactly `|tau0 omega|^gamma`.
pub fn law_comparison(
    gamma: f64,
    tau0: f64,
    c0: f64,
    omega_max: f64,
    points: usize,
) -> Result<LawComparison> {
    if points < 2 || !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(DemoError::Input("need points >= 2 and omega_max > 0".into()));
    }
    let alpha0 = 2.0 * c0 * tau0 / (PI * gamma / 2.0).cos().abs();
    let model = AttenuationModel::ksb(gamma, alpha0, tau0, c0)?;
    let omega: Vec<f64> = (0..points)
        .map(|i| omega_max * i as f64 / (points - 1) as f64)
        .collect();
    let ksb = omega
        .iter()
        .map(|&w| attenuation_law(&model, w))
        .collect::<attenuo::Result<Vec<_>>>()?;
    let power_law: Vec<f64> = omega.iter().map(|w| (tau0 * w).abs().powf(gamma)).collect();
    let max_rel_diff = ksb
        .iter()
        .zip(&power_law)
        .filter(|(_, p)| **p > 0.0)
        .map(|(a, p)| (a - p).abs() / p)
        .fold(0.0, f64::max);
    Ok(LawComparison {
        alpha0,
        omega,
        ksb,
        power_law,
        max_rel_diff,
    })
}

pub struct Spectrum {
    pub sigma: Vec<f64>,
    pub n_cut: usize,
}

pub fn singular_values(
    law_json: &str,
    c0: f64,
    distance: f64,
    n: usize,
    omega_max: f64,
) -> Result<Spectrum> {
    let model = parse_law(law_json)?;
    let g = grid(n, omega_max)?;
    let phantom = BallPhantom::new(1.0, 1.0)?;
    let det = DetectorGeometry::at_surface_distance(&phantom, distance, c0)?;
    let support = p0_support(&phantom, &det)?;
    let matrix = build_matrix(&model, c0, &g, support, default_n_cells(&g, support))?;
    let rep = svd_analyze(&matrix)?;
    Ok(Spectrum {
        sigma: rep.singular_values,
        n_cut: rep.n_cut,
    })
}
