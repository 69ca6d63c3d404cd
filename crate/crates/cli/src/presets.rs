//! Named parameter sets for the figures and worked examples.

use std::f64::consts::PI;

use attenuo::Law;

use crate::config::{BandSpec, GridSpec, PairingSpec, PhantomSpec, RunConfig};

/// Which command a preset belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    Kernel,
    LawCompare,
    Propagator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub kind: PresetKind,
    pub description: &'static str,
    pub config: RunConfig,
}

pub const NAMES: [&str; 17] = [
    "fig1a",
    "fig1b",
    "fig1c",
    "fig1d",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig2d",
    "fig3a",
    "fig3b",
    "fig4-liquid",
    "fig4-gas",
    "castor",
    "ex-gamma1.1",
    "ex-gamma2",
    "ex-powerlaw0.66",
    "lossless",
];

/// `(gamma, alpha0)` pairs of the power-law and Szabo kernel figures.
pub const KERNEL_PAIRS: [(f64, f64); 4] = [(0.5, 0.1581), (1.5, 0.0316), (2.7, 0.0071), (3.3, 0.0027)];

const KERNEL_R: f64 = 0.25;
const MEDIUM_C0: f64 = 0.15;
const MEDIUM_TAU0: f64 = 1e-4;
const MEDIUM_PREFACTOR: f64 = 0.04;

/// KSB `alpha0` whose low-frequency asymptote has prefactor `0.04`, as in the
/// castor-oil medium.
pub fn ksb_alpha0_for_prefactor(gamma: f64) -> f64 {
    2.0 * MEDIUM_C0 * MEDIUM_PREFACTOR / (MEDIUM_TAU0.powf(gamma - 1.0) * (PI * (gamma - 1.0) / 2.0).sin())
}

fn kernel(law: Law) -> RunConfig {
    RunConfig {
        law: Some(law),
        r: Some(KERNEL_R),
        grid: Some(GridSpec::PAPER),
        ..Default::default()
    }
}

fn propagator(law: Law, c0: f64) -> RunConfig {
    RunConfig {
        law: Some(law),
        c0: Some(c0),
        grid: Some(GridSpec::PAPER),
        phantom: Some(PhantomSpec {
            radius: 1.0,
            amplitude: 1.0,
        }),
        distances: Some(vec![0.0, 2.0, 4.0]),
        ..Default::default()
    }
}

fn ksb_medium(gamma: f64, alpha0: f64) -> Law {
    Law::Ksb {
        gamma,
        alpha0,
        tau0: MEDIUM_TAU0,
        c0: MEDIUM_C0,
    }
}

fn pairing(tau0: f64) -> RunConfig {
    RunConfig {
        pairing: Some(PairingSpec { gamma: 1.5, tau0, c0: 1.0 }),
        band: Some(BandSpec::EXPERIMENT),
        ..Default::default()
    }
}

pub fn preset(name: &str) -> Option<Preset> {
    use PresetKind::*;
    let (kind, description, config) = match name {
        "fig1a" | "fig1b" | "fig1c" | "fig1d" => {
            let (gamma, alpha0) = KERNEL_PAIRS[(name.as_bytes()[4] - b'a') as usize];
            (Kernel, "frequency power law kernel", kernel(Law::PowerLaw { gamma, alpha0 }))
        }
        "fig2a" | "fig2b" | "fig2c" | "fig2d" => {
            let (gamma, alpha0) = KERNEL_PAIRS[(name.as_bytes()[4] - b'a') as usize];
            (Kernel, "Szabo law kernel", kernel(Law::Szabo { gamma, alpha0, c0: 1.0 }))
        }
        "fig3a" => (Kernel, "thermo-viscous kernel", kernel(Law::ThermoViscous { tau0: 1e-5, c0: 1.0 })),
        "fig3b" => (
            Kernel,
            "KSB kernel, gamma = 2",
            kernel(Law::Ksb {
                gamma: 2.0,
                alpha0: 1.0,
                tau0: 1e-5,
                c0: 1.0,
            }),
        ),
        "fig4-liquid" => (LawCompare, "KSB vs power law, liquids", pairing(1e-6)),
        "fig4-gas" => (LawCompare, "KSB vs power law, gases", pairing(1e-4)),
        "castor" => (Propagator, "castor oil, KSB gamma = 1.66", propagator(ksb_medium(1.66, 6.0), MEDIUM_C0)),
        "ex-gamma1.1" => (
            Propagator,
            "KSB gamma = 1.1 medium",
            propagator(ksb_medium(1.1, ksb_alpha0_for_prefactor(1.1)), MEDIUM_C0),
        ),
        "ex-gamma2" => (
            Propagator,
            "KSB gamma = 2 medium",
            propagator(ksb_medium(2.0, ksb_alpha0_for_prefactor(2.0)), MEDIUM_C0),
        ),
        "ex-powerlaw0.66" => (
            Propagator,
            "frequency power law gamma = 0.66",
            propagator(
                Law::PowerLaw {
                    gamma: 0.66,
                    alpha0: MEDIUM_PREFACTOR * (PI * 0.33).cos(),
                },
                MEDIUM_C0,
            ),
        ),
        "lossless" => (Propagator, "no attenuation", propagator(Law::Lossless, MEDIUM_C0)),
        _ => return None,
    };
    let name = NAMES.iter().find(|n| **n == name)?;
    Some(Preset {
        name,
        kind,
        description,
        config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use attenuo::AttenuationModel;

    #[test]
    fn every_name_resolves_to_a_valid_law() {
        for name in NAMES {
            let p = preset(name).unwrap();
            if let Some(law) = p.config.law {
                AttenuationModel::new(law).unwrap();
            }
        }
        assert!(preset("fig9").is_none());
    }

    #[test]
    fn medium_alpha0_values() {
        assert!((ksb_alpha0_for_prefactor(1.1) - 0.1926).abs() < 1e-4);
        assert!((ksb_alpha0_for_prefactor(2.0) - 120.0).abs() < 1e-9);
    }
}
