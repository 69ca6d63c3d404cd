//! Attenuation kernels in the time domain and causality diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::{AttenuationModel, ChenHolmParams, Law};
use crate::spectral::{
    inverse_fourier_with_residue, pre_arrival_fraction, GridPair, SampledSignal, SampledSpectrum,
    Taper,
};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// The kernel `K(t, r) = (2 pi)^(-1/2) F^-1{exp(-alpha* r)}(t)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSample {
    pub law: &'static str,
    pub r: f64,
    pub taper: Taper,
    pub signal: SampledSignal,
    /// `max |Im| / max |Re|` of the inverse transform before the real part
    /// was taken.
    pub imag_residue: f64,
}

fn kernel_spectrum(model: &AttenuationModel, r: f64, grid: &GridPair) -> Result<SampledSpectrum> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain("kernel distance r must be >= 0"));
    }
    let alpha = grid.sample_alpha_star(model)?;
    let n = grid.n;
    let mut v: Vec<Complex64> = alpha.iter().map(|a| (-a * r).exp() * INV_SQRT_2PI).collect();
    // Re-impose exact symmetry after the exponential.
    for k in n / 2 + 1..n {
        v[n - k] = v[k].conj();
    }
    v[0].im = 0.0;
    v[n / 2].im = 0.0;
    if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::numerical(format!(
            "exp(-alpha* r) overflows for {} at r = {r}",
            model.name()
        )));
    }
    SampledSpectrum::hermitian(*grid, v)
}

/// The attenuation kernel `K(., r)` without any spectral window.
pub fn kernel_k(model: &AttenuationModel, r: f64, grid: &GridPair) -> Result<KernelSample> {
    kernel_k_tapered(model, r, grid, Taper::None)
}

/// The attenuation kernel with a spectral window applied before inversion.
pub fn kernel_k_tapered(
    model: &AttenuationModel,
    r: f64,
    grid: &GridPair,
    taper: Taper,
) -> Result<KernelSample> {
    let mut spec = kernel_spectrum(model, r, grid)?;
    taper.apply(&mut spec);
    let (signal, imag_residue) = inverse_fourier_with_residue(&spec)?;
    Ok(KernelSample {
        law: model.name(),
        r,
        taper,
        signal,
        imag_residue,
    })
}

/// The attenuated Green function `K(t - r/c0, r) / (4 pi r)` sampled in the
/// retarded time `t - r/c0`, i.e. on the same grid as the kernel.
pub fn attenuated_green(model: &AttenuationModel, r: f64, grid: &GridPair) -> Result<SampledSignal> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain("Green function distance r must be > 0"));
    }
    let k = kernel_k(model, r, grid)?;
    let s = 1.0 / (4.0 * PI * r);
    SampledSignal::new(*grid, k.signal.values.iter().map(|v| v * s).collect())
}

/// The kernel `K* = (2 pi)^(-1/2) F^-1{alpha*}` of the attenuation operator.
pub fn dstar_kernel(model: &AttenuationModel, grid: &GridPair) -> Result<SampledSignal> {
    let v = grid
        .sample_alpha_star(model)?
        .into_iter()
        .map(|a| a * INV_SQRT_2PI)
        .collect();
    let (s, _) = inverse_fourier_with_residue(&SampledSpectrum::hermitian(*grid, v)?)?;
    Ok(s)
}

/// What the analytic results predict for a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Causal,
    NonCausal,
    /// No theorem covers the parameters.
    Undetermined,
}

/// Expected causality of the kernel `K` from the known theorems.
pub fn expected_causality(model: &AttenuationModel) -> Expectation {
    use Expectation::*;
    match model.law() {
        Law::PowerLaw { gamma, .. } | Law::Szabo { gamma, .. } => {
            if *gamma < 1.0 {
                Causal
            } else {
                NonCausal
            }
        }
        Law::PowerLawGamma1 { .. } => NonCausal,
        Law::PowerLawPlus { gamma, alpha1, .. } => {
            if *gamma > 1.0 || *alpha1 < 0.0 {
                NonCausal
            } else {
                Causal
            }
        }
        Law::ThermoViscous { .. } => NonCausal,
        Law::Nsw { .. } => match model.nsw_derived() {
            Some(d) if d.causal_hypothesis => Causal,
            _ => Undetermined,
        },
        Law::GreenleafPatch { .. } => NonCausal,
        Law::Ksb { .. } => Causal,
        Law::ChenHolm(_) => Undetermined,
        Law::Lossless => Causal,
    }
}

/// Numerical causality classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalityVerdict {
    Causal,
    NonCausal,
}

/// Energy-based causality check of `K(., r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalityReport {
    pub law: &'static str,
    pub r: f64,
    pub guard: usize,
    pub threshold: f64,
    pub taper: Taper,
    pub pre_arrival_fraction: f64,
    pub verdict: CausalityVerdict,
    pub expected: Expectation,
    /// `None` when the expectation is undetermined.
    pub agrees: Option<bool>,
}

/// Fraction of pre-arrival energy above which a kernel is called non-causal.
pub const CAUSALITY_THRESHOLD: f64 = 1e-3;

/// Classify `K(., r)` by its energy at negative times.
///
/// A full-band Hann window is applied before inversion so that the Gibbs
/// ringing of truncating `exp(-alpha* r)` at the band edge is not mistaken for
/// a precursor.
pub fn causality_report(
    model: &AttenuationModel,
    r: f64,
    grid: &GridPair,
    guard: usize,
) -> Result<CausalityReport> {
    let k = kernel_k_tapered(model, r, grid, Taper::Hann)?;
    let fraction = pre_arrival_fraction(&k.signal, guard);
    let verdict = if fraction > CAUSALITY_THRESHOLD {
        CausalityVerdict::NonCausal
    } else {
        CausalityVerdict::Causal
    };
    let expected = expected_causality(model);
    let agrees = match expected {
        Expectation::Causal => Some(verdict == CausalityVerdict::Causal),
        Expectation::NonCausal => Some(verdict == CausalityVerdict::NonCausal),
        Expectation::Undetermined => None,
    };
    Ok(CausalityReport {
        law: model.name(),
        r,
        guard,
        threshold: CAUSALITY_THRESHOLD,
        taper: Taper::Hann,
        pre_arrival_fraction: fraction,
        verdict,
        expected,
        agrees,
    })
}

/// `H(t) c0^2 (2 pi)^(-3/2) e^{A t} sin(B t) / B` with `A = -alpha1 c0 k^gamma`
/// and `B = c0 sqrt(k^2 - alpha1^2 k^(2 gamma))`, continued through `sinh`
/// when the radicand is negative.
pub fn chen_holm_spectral_green(p: &ChenHolmParams, k: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let k = k.abs();
    let a = -p.alpha1 * p.c0 * k.powf(p.gamma);
    let rad = k * k - p.alpha1 * p.alpha1 * k.powf(2.0 * p.gamma);
    let b = p.c0 * rad.abs().sqrt();
    let bt = b * t;
    let osc = if bt < 1e-6 {
        // sin(Bt)/B and sinh(Bt)/B both tend to t
        let corr = if rad >= 0.0 { -1.0 } else { 1.0 } * bt * bt / 6.0;
        (a * t).exp() * t * (1.0 + corr)
    } else if rad >= 0.0 {
        (a * t).exp() * bt.sin() / b
    } else {
        (((a + b) * t).exp() - ((a - b) * t).exp()) / (2.0 * b)
    };
    p.c0 * p.c0 * INV_SQRT_2PI.powi(3) * osc
}

/// Radial Chen-Holm Green function
/// `G(r, t) = sqrt(2/pi) / r * int_0^k_max k sin(k r) G^(k, t) dk`
/// by composite Simpson with `n_quad` and `2 n_quad` panels; the two must agree
/// to `1e-4` relative.
pub fn chen_holm_radial_green(
    p: &ChenHolmParams,
    r: f64,
    t: f64,
    k_max: f64,
    n_quad: usize,
) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain("radial Green function needs r > 0"));
    }
    if !(k_max.is_finite() && k_max > 0.0) || n_quad < 64 {
        return Err(Error::domain("k_max must be positive and n_quad >= 64"));
    }
    let f = |k: f64| k * (k * r).sin() * chen_holm_spectral_green(p, k, t);
    let coarse = simpson(&f, k_max, n_quad);
    let fine = simpson(&f, k_max, 2 * n_quad);
    let scale = (2.0 / PI).sqrt() / r;
    let diff = (fine - coarse).abs();
    let mag = fine.abs().max(coarse.abs());
    if !fine.is_finite() {
        return Err(Error::numerical("Chen-Holm quadrature is not finite"));
    }
    if mag > 0.0 && diff > 1e-4 * mag {
        return Err(Error::Convergence {
            what: "Chen-Holm radial quadrature".into(),
            achieved: diff / mag,
            required: 1e-4,
        });
    }
    Ok(scale * fine)
}

fn simpson(f: &impl Fn(f64) -> f64, b: f64, panels: usize) -> f64 {
    let m = panels + panels % 2;
    let h = b / m as f64;
    let mut s = f(0.0) + f(b);
    for i in 1..m {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_distance_kernel_is_delta() {
        let g = GridPair::new(64, 10.0).unwrap();
        let m = AttenuationModel::power_law(0.5, 0.2).unwrap();
        let k = kernel_k(&m, 0.0, &g).unwrap();
        assert_relative_eq!(k.signal.values[0], 1.0 / g.delta_t, max_relative = 1e-12);
        assert!(k.signal.values[1..].iter().all(|v| v.abs() < 1e-9 / g.delta_t));
    }

    #[test]
    fn kernel_rejects_negative_distance() {
        let g = GridPair::new(64, 10.0).unwrap();
        let m = AttenuationModel::lossless();
        assert!(kernel_k(&m, -1.0, &g).is_err());
        assert!(attenuated_green(&m, 0.0, &g).is_err());
    }

    #[test]
    fn expectations_follow_theorems() {
        let pl = AttenuationModel::power_law(0.5, 1.0).unwrap();
        assert_eq!(expected_causality(&pl), Expectation::Causal);
        let plp = AttenuationModel::power_law_plus(0.5, 1.0, -0.1).unwrap();
        assert_eq!(expected_causality(&plp), Expectation::NonCausal);
        let tv = AttenuationModel::thermo_viscous(1e-3, 1.0).unwrap();
        assert_eq!(expected_causality(&tv), Expectation::NonCausal);
    }

    #[test]
    fn chen_holm_small_b_limit_is_continuous() {
        let p = ChenHolmParams {
            gamma: 1.0,
            alpha1: 1.0,
            c0: 1.0,
        };
        // alpha1 = 1, gamma = 1 makes the radicand vanish identically.
        let v = chen_holm_spectral_green(&p, 2.0, 0.5);
        let want = INV_SQRT_2PI.powi(3) * (-1.0f64).exp() * 0.5;
        assert_relative_eq!(v, want, max_relative = 1e-12);
        assert_eq!(chen_holm_spectral_green(&p, 2.0, -0.1), 0.0);
    }
}
