//! Complex attenuation laws `alpha*(omega)`.
//!
//! Every law satisfies `alpha*(-omega) = conj(alpha*(omega))` on the real axis
//! and `alpha*(0) = 0`. The physical attenuation is `Re alpha*`. Where the law
//! has a closed form in terms of `-i omega` the same expression is evaluated on
//! the closed upper half-plane for the sign scan.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One relaxation process of the Nachman-Smith-Waag model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relaxation {
    /// Compressibility contribution `kappa_m` (must be positive).
    pub kappa: f64,
    /// Relaxation time `tau_m` in us (must be positive).
    pub tau: f64,
}

/// Parameters of the Chen-Holm fractional wave equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChenHolmParams {
    pub gamma: f64,
    pub alpha1: f64,
    pub c0: f64,
}

/// The attenuation laws. Construct through [`AttenuationModel::new`] so the
/// parameter domain is checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum Law {
    /// `alpha0 / cos(pi gamma / 2) * (-i omega)^gamma`, `gamma > 0` not an integer.
    PowerLaw { gamma: f64, alpha0: f64 },
    /// The `gamma = 1` power law `alpha0 |omega| + i (2/pi) alpha0 omega ln|omega/omega0|`.
    PowerLawGamma1 { alpha0: f64, omega0: f64 },
    /// Power law plus a first-order term `alpha1 (-i omega)`.
    PowerLawPlus { gamma: f64, alpha0: f64, alpha1: f64 },
    /// Szabo's law built from the power law.
    Szabo { gamma: f64, alpha0: f64, c0: f64 },
    /// Thermo-viscous law.
    ThermoViscous { tau0: f64, c0: f64 },
    /// Nachman-Smith-Waag relaxation law.
    Nsw {
        c0: f64,
        rho0: f64,
        relaxations: Vec<Relaxation>,
    },
    /// Real law `alpha0 |omega|^order` with `order` 1 or 2. `omega0` only enters
    /// the half-plane extension of the order-1 law.
    GreenleafPatch { order: u8, alpha0: f64, omega0: f64 },
    /// Kowar-Scherzer-Bonnefond law, `gamma` in (1, 2].
    Ksb {
        gamma: f64,
        alpha0: f64,
        tau0: f64,
        c0: f64,
    },
    /// Chen-Holm model. It is not of the standard `alpha*` form and is handled
    /// through its own Green function.
    ChenHolm(ChenHolmParams),
    /// No attenuation, `alpha* = 0`.
    Lossless,
}

/// Derived quantities of the NSW law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NswDerived {
    pub c0_tilde: f64,
    pub tau_tilde: Vec<f64>,
    /// Whether `tau_tilde_m < tau_m` holds for every process, the sufficient
    /// condition under which the law is causal.
    pub causal_hypothesis: bool,
}

/// A validated attenuation law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttenuationModel {
    law: Law,
    #[serde(skip)]
    nsw: Option<NswDerived>,
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(msg))
    }
}

fn finite_positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// `alpha0 / cos(pi gamma / 2)`, the coefficient in front of `(-i omega)^gamma`.
pub fn tilde_alpha0(gamma: f64, alpha0: f64) -> f64 {
    alpha0 / (PI * gamma / 2.0).cos()
}

/// Derive `c0_tilde` and `tau_tilde_m` for the NSW law.
pub fn nsw_derive(c0: f64, rho0: f64, relaxations: &[Relaxation]) -> Result<NswDerived> {
    check(finite_positive(c0), "NSW requires c0 > 0")?;
    check(finite_positive(rho0), "NSW requires rho0 > 0")?;
    check(!relaxations.is_empty(), "NSW requires at least one relaxation process")?;
    for r in relaxations {
        check(finite_positive(r.kappa), "NSW requires kappa_m > 0")?;
        check(finite_positive(r.tau), "NSW requires tau_m > 0")?;
    }
    let n = relaxations.len() as f64;
    let sum: f64 = relaxations.iter().map(|r| c0 * c0 * rho0 * r.kappa).sum();
    let c0_tilde = c0 / (1.0 + sum).sqrt();
    let tau_tilde: Vec<f64> = relaxations
        .iter()
        .map(|r| r.tau * (1.0 - n * c0_tilde * c0_tilde * rho0 * r.kappa))
        .collect();
    let causal_hypothesis = tau_tilde
        .iter()
        .zip(relaxations)
        .all(|(tt, r)| *tt < r.tau);
    Ok(NswDerived {
        c0_tilde,
        tau_tilde,
        causal_hypothesis,
    })
}

impl AttenuationModel {
    /// Validate the parameters of `law`.
    pub fn new(law: Law) -> Result<Self> {
        let mut nsw = None;
        match &law {
            Law::PowerLaw { gamma, alpha0 } => {
                check(finite_positive(*gamma), "power law requires gamma > 0")?;
                check(!is_integer(*gamma), "power law requires non-integer gamma")?;
                check(alpha0.is_finite() && *alpha0 >= 0.0, "power law requires alpha0 >= 0")?;
            }
            Law::PowerLawGamma1 { alpha0, omega0 } => {
                check(alpha0.is_finite() && *alpha0 >= 0.0, "gamma=1 law requires alpha0 >= 0")?;
                check(omega0.is_finite() && *omega0 != 0.0, "gamma=1 law requires omega0 != 0")?;
            }
            Law::PowerLawPlus {
                gamma,
                alpha0,
                alpha1,
            } => {
                check(finite_positive(*gamma), "power law requires gamma > 0")?;
                check(!is_integer(*gamma), "power law requires non-integer gamma")?;
                check(alpha0.is_finite() && *alpha0 >= 0.0, "power law requires alpha0 >= 0")?;
                check(alpha1.is_finite(), "alpha1 must be finite")?;
            }
            Law::Szabo { gamma, alpha0, c0 } => {
                check(finite_positive(*gamma), "Szabo law requires gamma > 0")?;
                check(!is_integer(*gamma), "Szabo law requires non-integer gamma")?;
                check(alpha0.is_finite() && *alpha0 >= 0.0, "Szabo law requires alpha0 >= 0")?;
                check(finite_positive(*c0), "Szabo law requires c0 > 0")?;
            }
            Law::ThermoViscous { tau0, c0 } => {
                check(finite_positive(*tau0), "thermo-viscous law requires tau0 > 0")?;
                check(finite_positive(*c0), "thermo-viscous law requires c0 > 0")?;
            }
            Law::Nsw {
                c0,
                rho0,
                relaxations,
            } => {
                nsw = Some(nsw_derive(*c0, *rho0, relaxations)?);
            }
            Law::GreenleafPatch {
                order,
                alpha0,
                omega0,
            } => {
                check(*order == 1 || *order == 2, "Greenleaf-Patch law requires order 1 or 2")?;
                check(alpha0.is_finite() && *alpha0 >= 0.0, "Greenleaf-Patch law requires alpha0 >= 0")?;
                check(omega0.is_finite() && *omega0 != 0.0, "Greenleaf-Patch law requires omega0 != 0")?;
            }
            Law::Ksb {
                gamma,
                alpha0,
                tau0,
                c0,
            } => {
                check(
                    gamma.is_finite() && *gamma > 1.0 && *gamma <= 2.0,
                    "KSB law requires gamma in (1, 2]",
                )?;
                check(finite_positive(*alpha0), "KSB law requires alpha0 > 0")?;
                check(finite_positive(*tau0), "KSB law requires tau0 > 0")?;
                check(finite_positive(*c0), "KSB law requires c0 > 0")?;
            }
            Law::ChenHolm(p) => {
                check(finite_positive(p.gamma), "Chen-Holm model requires gamma > 0")?;
                check(p.alpha1.is_finite() && p.alpha1 >= 0.0, "Chen-Holm model requires alpha1 >= 0")?;
                check(finite_positive(p.c0), "Chen-Holm model requires c0 > 0")?;
            }
            Law::Lossless => {}
        }
        Ok(Self { law, nsw })
    }

    pub fn power_law(gamma: f64, alpha0: f64) -> Result<Self> {
        Self::new(Law::PowerLaw { gamma, alpha0 })
    }

    pub fn power_law_gamma1(alpha0: f64, omega0: f64) -> Result<Self> {
        Self::new(Law::PowerLawGamma1 { alpha0, omega0 })
    }

    pub fn power_law_plus(gamma: f64, alpha0: f64, alpha1: f64) -> Result<Self> {
        Self::new(Law::PowerLawPlus {
            gamma,
            alpha0,
            alpha1,
        })
    }

    pub fn szabo(gamma: f64, alpha0: f64, c0: f64) -> Result<Self> {
        Self::new(Law::Szabo { gamma, alpha0, c0 })
    }

    pub fn thermo_viscous(tau0: f64, c0: f64) -> Result<Self> {
        Self::new(Law::ThermoViscous { tau0, c0 })
    }

    pub fn nsw(c0: f64, rho0: f64, relaxations: Vec<Relaxation>) -> Result<Self> {
        Self::new(Law::Nsw {
            c0,
            rho0,
            relaxations,
        })
    }

    pub fn greenleaf_patch(order: u8, alpha0: f64, omega0: f64) -> Result<Self> {
        Self::new(Law::GreenleafPatch {
            order,
            alpha0,
            omega0,
        })
    }

    pub fn ksb(gamma: f64, alpha0: f64, tau0: f64, c0: f64) -> Result<Self> {
        Self::new(Law::Ksb {
            gamma,
            alpha0,
            tau0,
            c0,
        })
    }

    pub fn chen_holm(gamma: f64, alpha1: f64, c0: f64) -> Result<Self> {
        Self::new(Law::ChenHolm(ChenHolmParams { gamma, alpha1, c0 }))
    }

    pub fn lossless() -> Self {
        Self {
            law: Law::Lossless,
            nsw: None,
        }
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    /// Derived NSW quantities, present only for the NSW law.
    pub fn nsw_derived(&self) -> Option<&NswDerived> {
        self.nsw.as_ref()
    }

    /// Short identifier used in reports.
    pub fn name(&self) -> &'static str {
        match self.law {
            Law::PowerLaw { .. } => "power_law",
            Law::PowerLawGamma1 { .. } => "power_law_gamma1",
            Law::PowerLawPlus { .. } => "power_law_plus",
            Law::Szabo { .. } => "szabo",
            Law::ThermoViscous { .. } => "thermo_viscous",
            Law::Nsw { .. } => "nsw",
            Law::GreenleafPatch { .. } => "greenleaf_patch",
            Law::Ksb { .. } => "ksb",
            Law::ChenHolm(_) => "chen_holm",
            Law::Lossless => "lossless",
        }
    }

    /// Sound speed carried by the law, if it has one.
    pub fn c0(&self) -> Option<f64> {
        match &self.law {
            Law::Szabo { c0, .. }
            | Law::ThermoViscous { c0, .. }
            | Law::Nsw { c0, .. }
            | Law::Ksb { c0, .. } => Some(*c0),
            Law::ChenHolm(p) => Some(p.c0),
            _ => None,
        }
    }

    fn standard_form(&self) -> Result<()> {
        if let Law::ChenHolm(_) = self.law {
            Err(Error::domain(
                "the Chen-Holm model has no alpha* of standard form; use its Green function",
            ))
        } else {
            Ok(())
        }
    }

    /// One-sided limits `lim alpha*(omega) / (-i omega)` as omega tends to
    /// `0+` and `0-`. `None` stands for an infinite limit.
    pub fn low_frequency_limits(&self) -> Result<[Option<Complex64>; 2]> {
        self.standard_form()?;
        let zero = Some(Complex64::new(0.0, 0.0));
        let both = |v: Option<Complex64>| [v, v];
        Ok(match &self.law {
            Law::PowerLaw { gamma, alpha0 } => {
                if *gamma > 1.0 || *alpha0 == 0.0 {
                    both(zero)
                } else {
                    both(None)
                }
            }
            Law::PowerLawGamma1 { alpha0, .. } => {
                if *alpha0 == 0.0 {
                    both(zero)
                } else {
                    both(None)
                }
            }
            Law::PowerLawPlus {
                gamma,
                alpha0,
                alpha1,
            } => {
                if *gamma > 1.0 || *alpha0 == 0.0 {
                    both(Some(Complex64::new(*alpha1, 0.0)))
                } else {
                    both(None)
                }
            }
            Law::Szabo { gamma, alpha0, .. } => {
                if *gamma > 1.0 || *alpha0 == 0.0 {
                    both(zero)
                } else {
                    both(None)
                }
            }
            Law::ThermoViscous { .. } => both(zero),
            Law::Nsw { c0, .. } => {
                let d = self.nsw.as_ref().expect("validated NSW law");
                both(Some(Complex64::new((c0 / d.c0_tilde - 1.0) / c0, 0.0)))
            }
            Law::GreenleafPatch { order, alpha0, .. } => {
                if *order == 2 {
                    both(zero)
                } else {
                    // alpha0 |omega| / (-i omega) = i alpha0 sgn(omega)
                    [
                        Some(Complex64::new(0.0, *alpha0)),
                        Some(Complex64::new(0.0, -*alpha0)),
                    ]
                }
            }
            Law::Ksb { alpha0, c0, .. } => both(Some(Complex64::new(alpha0 / c0, 0.0))),
            Law::ChenHolm(_) => unreachable!(),
            Law::Lossless => both(zero),
        })
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re < 0.0
}

/// Principal square root, `Re >= 0`, branch cut on the negative real axis.
/// Arguments exactly on the cut are rejected.
pub fn principal_sqrt(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::numerical(format!("sqrt of non-finite value {z}")));
    }
    if on_cut(z) {
        return Err(Error::numerical(format!("sqrt argument {z} lies on the branch cut")));
    }
    Ok(z.sqrt())
}

/// Principal power `exp(p log z)` with `0^p = 0` for `p > 0`. Arguments exactly
/// on the negative real axis are rejected.
pub fn principal_pow(z: Complex64, p: f64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::numerical(format!("power of non-finite value {z}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return if p > 0.0 {
            Ok(z)
        } else {
            Err(Error::numerical("non-positive power of zero"))
        };
    }
    if on_cut(z) {
        return Err(Error::numerical(format!("power argument {z} lies on the branch cut")));
    }
    Ok((p * z.ln()).exp())
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::numerical("attenuation law evaluated to a non-finite value"))
    }
}

/// Core closed form evaluated at `z` with `Im z >= 0`.
fn eval_closed_form(model: &AttenuationModel, z: Complex64) -> Result<Complex64> {
    let s = -I * z; // -i z, lies in the closed right half-plane
    let v = match &model.law {
        Law::PowerLaw { gamma, alpha0 } => tilde_alpha0(*gamma, *alpha0) * principal_pow(s, *gamma)?,
        Law::PowerLawGamma1 { alpha0, omega0 } => {
            gamma1_extension(*alpha0, *omega0, z)?
        }
        Law::PowerLawPlus {
            gamma,
            alpha0,
            alpha1,
        } => tilde_alpha0(*gamma, *alpha0) * principal_pow(s, *gamma)? + alpha1 * s,
        Law::Szabo { gamma, alpha0, c0 } => {
            let a = tilde_alpha0(*gamma, *alpha0);
            let arg = s * s + 2.0 * a * c0 * principal_pow(s, gamma + 1.0)?;
            principal_sqrt(arg)? / *c0 + I * z / *c0
        }
        Law::ThermoViscous { tau0, c0 } => {
            let root = principal_sqrt(1.0 + tau0 * s)?;
            s / (c0 * root) + I * z / *c0
        }
        Law::Nsw {
            c0, relaxations, ..
        } => {
            let d = model.nsw.as_ref().expect("validated NSW law");
            let n = relaxations.len() as f64;
            let mean: Complex64 = relaxations
                .iter()
                .zip(&d.tau_tilde)
                .map(|(r, tt)| (1.0 + tt * s) / (1.0 + r.tau * s))
                .sum::<Complex64>()
                / n;
            (s / *c0) * ((c0 / d.c0_tilde) * principal_sqrt(mean)? - 1.0)
        }
        Law::GreenleafPatch {
            order,
            alpha0,
            omega0,
        } => {
            if *order == 2 {
                alpha0 * z * z
            } else {
                gamma1_extension(*alpha0, *omega0, z)?
            }
        }
        Law::Ksb {
            gamma,
            alpha0,
            tau0,
            c0,
        } => {
            let root = principal_sqrt(1.0 + principal_pow(tau0 * s, gamma - 1.0)?)?;
            alpha0 * s / (c0 * root)
        }
        Law::ChenHolm(_) => unreachable!(),
        Law::Lossless => Complex64::new(0.0, 0.0),
    };
    finite(v)
}

/// `alpha0 z + i (2 alpha0 / pi) z log(z / |omega0|)`, whose boundary values
/// reproduce `alpha0 |omega| + i (2/pi) alpha0 omega ln|omega/omega0|`.
fn gamma1_extension(alpha0: f64, omega0: f64, z: Complex64) -> Result<Complex64> {
    let w = z / omega0.abs();
    let log = if w.im == 0.0 && w.re < 0.0 {
        // boundary value from the upper half-plane
        Complex64::new((-w.re).ln(), PI)
    } else {
        w.ln()
    };
    Ok(alpha0 * z + I * (2.0 * alpha0 / PI) * z * log)
}

/// Evaluate `alpha*(omega)` on the real axis.
pub fn eval_alpha_star(model: &AttenuationModel, omega: f64) -> Result<Complex64> {
    model.standard_form()?;
    if !omega.is_finite() {
        return Err(Error::domain("omega must be finite"));
    }
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    match &model.law {
        Law::PowerLawGamma1 { alpha0, omega0 } => Ok(Complex64::new(
            alpha0 * omega.abs(),
            (2.0 / PI) * alpha0 * omega * (omega / omega0).abs().ln(),
        )),
        Law::GreenleafPatch { order, alpha0, .. } => {
            Ok(Complex64::new(alpha0 * omega.abs().powi(*order as i32), 0.0))
        }
        _ => eval_closed_form(model, Complex64::new(omega, 0.0)),
    }
}

/// The physical attenuation `Re alpha*(omega)`.
pub fn attenuation_law(model: &AttenuationModel, omega: f64) -> Result<f64> {
    Ok(eval_alpha_star(model, omega)?.re)
}

/// Evaluate the holomorphic extension of the law at `z` with `Im z >= 0`.
///
/// For the real Greenleaf-Patch law of order 1 the extension of the `gamma = 1`
/// power law is used; for order 2 it is `alpha0 z^2`, the continuation of
/// `alpha0 omega^2`.
pub fn eval_alpha_star_halfplane(model: &AttenuationModel, z: Complex64) -> Result<Complex64> {
    model.standard_form()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("z must be finite"));
    }
    if z.im < 0.0 {
        return Err(Error::domain("z must lie in the closed upper half-plane"));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    eval_closed_form(model, z)
}

/// Verdict of the half-plane sign scan. This is a heuristic, not a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanVerdict {
    LikelyCausal,
    LikelyNonCausal,
}

/// Result of [`halfplane_sign_scan`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignScanReport {
    /// Smallest `Re alpha*(z)` over the scanned points.
    pub min_re: f64,
    /// Point at which `min_re` was attained.
    pub argmin_re: f64,
    pub argmin_im: f64,
    /// Largest `|alpha*(z)|` over the scan, used to scale the tolerance.
    pub scale: f64,
    /// Least-squares exponent `mu` of `-Re alpha* ~ C |z|^mu` along the ray
    /// through the witness, when at least two negative samples exist there.
    pub growth_exponent: Option<f64>,
    pub verdict: ScanVerdict,
    /// Always true: the scan samples finitely many points.
    pub heuristic: bool,
}

impl SignScanReport {
    pub fn argmin(&self) -> Complex64 {
        Complex64::new(self.argmin_re, self.argmin_im)
    }
}

/// Sample `Re alpha*` on the polar grid `radius * exp(i angle)` with angles in
/// `[0, pi]` and report the most negative value.
pub fn halfplane_sign_scan(
    model: &AttenuationModel,
    radii: &[f64],
    angles: &[f64],
) -> Result<SignScanReport> {
    model.standard_form()?;
    if radii.is_empty() || angles.is_empty() {
        return Err(Error::domain("sign scan needs at least one radius and one angle"));
    }
    if radii.iter().any(|r| !finite_positive(*r)) {
        return Err(Error::domain("scan radii must be positive"));
    }
    if angles.iter().any(|a| !(0.0..=PI).contains(a)) {
        return Err(Error::domain("scan angles must lie in [0, pi]"));
    }
    let mut min_re = f64::INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    let mut arg_angle = angles[0];
    let mut scale: f64 = 0.0;
    for &a in angles {
        for &r in radii {
            let z = Complex64::from_polar(r, a);
            let z = Complex64::new(z.re, z.im.max(0.0));
            let v = eval_alpha_star_halfplane(model, z)?;
            scale = scale.max(v.norm());
            if v.re < min_re {
                min_re = v.re;
                argmin = z;
                arg_angle = a;
            }
        }
    }
    let tol = 1e-10 * (1.0 + scale);
    let verdict = if min_re < -tol {
        ScanVerdict::LikelyNonCausal
    } else {
        ScanVerdict::LikelyCausal
    };

    let growth_exponent = if verdict == ScanVerdict::LikelyNonCausal {
        let mut pts = Vec::new();
        for &r in radii {
            let z = Complex64::from_polar(r, arg_angle);
            let z = Complex64::new(z.re, z.im.max(0.0));
            let v = eval_alpha_star_halfplane(model, z)?;
            if v.re < -tol {
                pts.push((r.ln(), (-v.re).ln()));
            }
        }
        least_squares_slope(&pts)
    } else {
        None
    };

    Ok(SignScanReport {
        min_re,
        argmin_re: argmin.re,
        argmin_im: argmin.im,
        scale,
        growth_exponent,
        verdict,
        heuristic: true,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_law_real_part_is_alpha0_power() {
        let m = AttenuationModel::power_law(1.5, 0.0316).unwrap();
        for w in [0.1, 1.0, 7.3, 60.0] {
            let a = eval_alpha_star(&m, w).unwrap();
            assert_relative_eq!(a.re, 0.0316 * w.powf(1.5), max_relative = 1e-12);
            let b = eval_alpha_star(&m, -w).unwrap();
            assert_relative_eq!(b.re, a.re, max_relative = 1e-14);
            assert_relative_eq!(b.im, -a.im, max_relative = 1e-14);
        }
    }

    #[test]
    fn gamma1_boundary_value_matches_real_formula() {
        let m = AttenuationModel::power_law_gamma1(0.3, 2.0).unwrap();
        for w in [-5.0, -0.4, 0.7, 9.0] {
            let a = eval_alpha_star(&m, w).unwrap();
            let b = eval_alpha_star_halfplane(&m, Complex64::new(w, 0.0)).unwrap();
            assert_relative_eq!(a.re, b.re, epsilon = 1e-12);
            assert_relative_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn szabo_reduces_to_power_law_at_small_alpha() {
        let m = AttenuationModel::szabo(0.5, 1e-6, 1.0).unwrap();
        let a = attenuation_law(&m, 2.0).unwrap();
        assert_relative_eq!(a, 1e-6 * 2f64.sqrt(), max_relative = 1e-4);
    }

    #[test]
    fn thermo_viscous_matches_closed_real_part() {
        let (tau, c0) = (1e-2, 1.5);
        let m = AttenuationModel::thermo_viscous(tau, c0).unwrap();
        for w in [0.3, 5.0, 80.0] {
            let x: f64 = tau * w;
            let want = tau * w * w
                / (2f64.sqrt() * c0 * ((1.0 + (1.0 + x * x).sqrt()) * (1.0 + x * x)).sqrt());
            assert_relative_eq!(attenuation_law(&m, w).unwrap(), want, max_relative = 1e-10);
        }
    }

    #[test]
    fn nsw_worked_example() {
        let d = nsw_derive(1.0, 3.0, &[Relaxation { kappa: 1.0, tau: 0.2 }]).unwrap();
        assert_relative_eq!(d.c0_tilde, 0.5, max_relative = 1e-15);
        assert_relative_eq!(d.tau_tilde[0], 0.2 * 0.25, max_relative = 1e-14);
        assert!(d.causal_hypothesis);
    }

    #[test]
    fn ksb_small_frequency_asymptote() {
        let (g, a0, tau, c0) = (2.0, 1.0, 1e-5, 1.0);
        let m = AttenuationModel::ksb(g, a0, tau, c0).unwrap();
        let w = 1e-3 / tau;
        let want = a0 * (PI * (g - 1.0) / 2.0).sin() / (2.0 * c0 * tau) * (tau * w).powf(g);
        assert_relative_eq!(attenuation_law(&m, w).unwrap(), want, max_relative = 5e-3);
    }

    #[test]
    fn chen_holm_has_no_standard_alpha() {
        let m = AttenuationModel::chen_holm(1.0, 0.1, 1.0).unwrap();
        assert!(matches!(eval_alpha_star(&m, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(AttenuationModel::power_law(2.0, 0.1).is_err());
        assert!(AttenuationModel::ksb(1.0, 1.0, 1e-4, 1.0).is_err());
        assert!(AttenuationModel::ksb(2.5, 1.0, 1e-4, 1.0).is_err());
        assert!(AttenuationModel::greenleaf_patch(3, 1.0, 1.0).is_err());
        assert!(AttenuationModel::thermo_viscous(-1.0, 1.0).is_err());
        assert!(AttenuationModel::power_law_gamma1(1.0, 0.0).is_err());
    }

    #[test]
    fn principal_sqrt_rejects_cut() {
        assert!(principal_sqrt(Complex64::new(-1.0, 0.0)).is_err());
        let r = principal_sqrt(Complex64::new(-1.0, 1e-300)).unwrap();
        assert!(r.re >= 0.0);
    }

    #[test]
    fn slope_fit_recovers_exponent() {
        let pts: Vec<_> = (1..6).map(|k| (k as f64, 1.7 * k as f64 + 0.3)).collect();
        assert_relative_eq!(least_squares_slope(&pts).unwrap(), 1.7, max_relative = 1e-12);
    }
}
