//! Run configuration: presets, JSON files and command-line overrides all
//! resolve to a [`RunConfig`].

use std::fmt;
use std::path::Path;

use attenuo::{GridPair, Law};
use serde::{Deserialize, Serialize};

/// A configuration problem. Maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub omega_max: f64,
}

impl GridSpec {
    pub const PAPER: GridSpec = GridSpec { n: 512, omega_max: 80.0 };

    /// Parses `paper` or `n,omega_max`.
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        if s.trim() == "paper" {
            return Ok(Self::PAPER);
        }
        let (n, w) = s
            .split_once(',')
            .ok_or_else(|| config_error(format!("grid `{s}` is not `paper` or `n,omega_max`")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| config_error(format!("grid size `{n}` is not an integer")))?;
        let omega_max = w
            .trim()
            .parse()
            .map_err(|_| config_error(format!("grid omega_max `{w}` is not a number")))?;
        Ok(Self { n, omega_max })
    }

    pub fn build(&self) -> anyhow::Result<GridPair> {
        GridPair::new(self.n, self.omega_max).map_err(|e| config_error(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub radius: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

/// KSB law paired with the power law `|tau0 omega|^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub gamma: f64,
    pub tau0: f64,
    #[serde(default = "unit")]
    pub c0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

impl BandSpec {
    pub const EXPERIMENT: BandSpec = BandSpec {
        omega_min: 0.0,
        omega_max: 60.0,
        points: 601,
    };

    pub fn samples(&self) -> anyhow::Result<Vec<f64>> {
        if self.points < 2 || !(self.omega_max > self.omega_min) {
            return Err(config_error("band needs points >= 2 and omega_max > omega_min"));
        }
        let h = (self.omega_max - self.omega_min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.omega_min + h * i as f64).collect())
    }
}

/// Every setting a command can take. Absent fields fall back to per-command
/// defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<Law>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Kernel distance in cm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Sound speed of the propagator in cm/us, defaulting to the law's `c0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phantom: Option<PhantomSpec>,
    /// Detector distances `L` from the ball surface in cm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<f64>>,
    /// Detector distance from the ball centre; alternative to `distances`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<BandSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<std::path::PathBuf>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    /// Fields set in `top` replace those of `self`.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        overlay_fields!(self, top; law, grid, r, c0, phantom, distances, r0, rank, pairing, band, format, out);
        self
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn grid_pair(&self) -> anyhow::Result<GridPair> {
        self.grid.unwrap_or(GridSpec::PAPER).build()
    }

    pub fn require_law(&self) -> anyhow::Result<&Law> {
        self.law
            .as_ref()
            .ok_or_else(|| config_error("no attenuation law given (use --law or --preset)"))
    }

    pub fn phantom_spec(&self) -> PhantomSpec {
        self.phantom.unwrap_or(PhantomSpec {
            radius: 1.0,
            amplitude: 1.0,
        })
    }

    /// Detector distances from the ball surface.
    pub fn surface_distances(&self) -> anyhow::Result<Vec<f64>> {
        match (&self.distances, self.r0) {
            (Some(_), Some(_)) => Err(config_error("give either distances (L) or r0, not both")),
            (Some(d), None) if d.is_empty() => Err(config_error("empty distance list")),
            (Some(d), None) => Ok(d.clone()),
            (None, Some(r0)) => Ok(vec![r0 - self.phantom_spec().radius]),
            (None, None) => Ok(vec![0.0]),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// Names of laws carrying their own sound speed.
pub fn law_has_c0(name: &str) -> bool {
    matches!(name, "szabo" | "thermo_viscous" | "nsw" | "ksb" | "chen_holm")
}

/// Parse a comma-separated list of numbers.
pub fn parse_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| config_error(format!("`{t}` is not a number")))
        })
        .collect()
}
