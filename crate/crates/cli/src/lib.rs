//! Command-line front end for `attenuo`: presets, configuration resolution and
//! the four experiments `kernel`, `lawcompare`, `svd` and `forward-invert`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error, 1 for
//! anything else (I/O).

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

pub use commands::{run, Command, RunOptions, SCHEMA_VERSION};
pub use config::{config_error, ConfigError, Format, GridSpec, RunConfig};
pub use output::OutputDir;
pub use presets::{preset, Preset, PresetKind};

#[derive(Debug, Parser)]
#[command(name = "attenuo", version, about = "Attenuation laws, causality and SVD experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Kernel K(t, r) with a causality report.
    Kernel(RunArgs),
    /// KSB law against the power law it approximates.
    Lawcompare(RunArgs),
    /// Singular values of the attenuated-to-unattenuated propagator.
    Svd(RunArgs),
    /// Forward model followed by truncated-SVD inversion.
    ForwardInvert(RunArgs),
    /// List the presets.
    Presets,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Named parameter set, see `attenuo presets`.
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON configuration file; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub law: LawArgs,
    /// `paper` or `n,omega_max` (MHz).
    #[arg(long)]
    pub grid: Option<String>,
    /// Kernel distance (cm).
    #[arg(long)]
    pub r: Option<f64>,
    /// Propagator sound speed (cm/us); defaults to the law's c0.
    #[arg(long)]
    pub sound_speed: Option<f64>,
    /// Ball radius (cm).
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Ball amplitude.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Detector distances from the ball surface (cm), comma separated.
    #[arg(long = "L")]
    pub distances: Option<String>,
    /// Detector distance from the ball centre (cm).
    #[arg(long)]
    pub r0: Option<f64>,
    /// Number of singular values kept by forward-invert (default n_cut).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Frequency band `min,max,points` for lawcompare (MHz).
    #[arg(long)]
    pub band: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Also write a matplotlib script plotting the tables.
    #[arg(long)]
    pub plot_script: bool,
    /// Skip the |M^| heat maps of the svd command.
    #[arg(long)]
    pub no_heatmap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LawArgs {
    /// Law name: power_law, power_law_gamma1, power_law_plus, szabo,
    /// thermo_viscous, nsw, greenleaf_patch, ksb, chen_holm, lossless.
    #[arg(long)]
    pub law: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub tau0: Option<f64>,
    /// Sound speed of the law (cm/us).
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Greenleaf-Patch order (1 or 2).
    #[arg(long)]
    pub order: Option<u8>,
    #[arg(long)]
    pub rho0: Option<f64>,
    /// NSW compressibilities, comma separated.
    #[arg(long)]
    pub kappa: Option<String>,
    /// NSW relaxation times (us), comma separated.
    #[arg(long)]
    pub tau: Option<String>,
}

impl LawArgs {
    fn has_params(&self) -> bool {
        self.gamma.is_some()
            || self.alpha0.is_some()
            || self.alpha1.is_some()
            || self.tau0.is_some()
            || self.c0.is_some()
            || self.omega0.is_some()
            || self.order.is_some()
            || self.rho0.is_some()
            || self.kappa.is_some()
            || self.tau.is_some()
    }
}

fn law_object(law: &attenuo::Law) -> Map<String, Value> {
    match serde_json::to_value(law) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("laws serialize to objects"),
    }
}

/// Apply the law flags on top of `base`. Returns the law and, for laws
/// without their own sound speed, a `--c0` meant for the propagator.
pub fn law_from_flags(
    base: Option<&attenuo::Law>,
    a: &LawArgs,
) -> anyhow::Result<(Option<attenuo::Law>, Option<f64>)> {
    let requested = a.law.as_ref().map(|n| n.trim().replace('-', "_"));
    let mut obj = match (requested, base) {
        (Some(name), Some(b)) if law_object(b).get("law") == Some(&json!(name)) => law_object(b),
        (Some(name), _) => {
            let mut m = Map::new();
            m.insert("law".into(), json!(name));
            m
        }
        (None, Some(b)) if a.has_params() => law_object(b),
        (None, Some(b)) => return Ok((Some(b.clone()), None)),
        (None, None) if a.has_params() => return Err(config_error("law parameters given without --law")),
        (None, None) => return Ok((None, None)),
    };
    let name = obj["law"].as_str().unwrap_or_default().to_owned();
    let mut set = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            obj.insert(k.into(), json!(v));
        }
    };
    set("gamma", a.gamma);
    set("alpha0", a.alpha0);
    set("alpha1", a.alpha1);
    set("tau0", a.tau0);
    set("omega0", a.omega0);
    set("rho0", a.rho0);
    let mut propagator_c0 = None;
    if config::law_has_c0(&name) {
        set("c0", a.c0);
    } else {
        propagator_c0 = a.c0;
    }
    if let Some(o) = a.order {
        obj.insert("order".into(), json!(o));
    }
    match (&a.kappa, &a.tau) {
        (Some(k), Some(t)) => {
            let (k, t) = (config::parse_list(k)?, config::parse_list(t)?);
            if k.len() != t.len() {
                return Err(config_error("--kappa and --tau need the same number of entries"));
            }
            let rel: Vec<Value> = k.iter().zip(&t).map(|(k, t)| json!({"kappa": k, "tau": t})).collect();
            obj.insert("relaxations".into(), Value::Array(rel));
        }
        (None, None) => {}
        _ => return Err(config_error("--kappa and --tau must be given together")),
    }
    let law: attenuo::Law = serde_json::from_value(Value::Object(obj))
        .map_err(|e| config_error(format!("invalid law `{name}`: {e}")))?;
    Ok((Some(law), propagator_c0))
}

fn expected_kind(command: Command) -> PresetKind {
    match command {
        Command::Kernel => PresetKind::Kernel,
        Command::LawCompare => PresetKind::LawCompare,
        Command::Svd | Command::ForwardInvert => PresetKind::Propagator,
    }
}

/// Merge preset, configuration file and flags, in that order of precedence
/// from lowest to highest.
pub fn resolve(command: Command, args: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &args.preset {
        Some(name) => {
            let p = preset(name).ok_or_else(|| config_error(format!("unknown preset `{name}`")))?;
            if p.kind != expected_kind(command) {
                return Err(config_error(format!(
                    "preset `{name}` does not belong to the {} command",
                    command.name()
                )));
            }
            p.config
        }
        None => RunConfig::default(),
    };
    if let Some(path) = &args.config {
        cfg = cfg.overlay(RunConfig::load(path)?);
    }
    if command == Command::LawCompare {
        let l = &args.law;
        if l.law.is_some() || l.alpha0.is_some() || l.alpha1.is_some() || l.kappa.is_some() || l.tau.is_some() {
            return Err(config_error("lawcompare takes only --gamma, --tau0 and --c0"));
        }
        if l.gamma.is_some() || l.tau0.is_some() || l.c0.is_some() {
            let base = cfg.pairing;
            let gamma = l.gamma.or(base.map(|p| p.gamma));
            let tau0 = l.tau0.or(base.map(|p| p.tau0));
            let (Some(gamma), Some(tau0)) = (gamma, tau0) else {
                return Err(config_error("lawcompare needs both --gamma and --tau0"));
            };
            cfg.pairing = Some(config::PairingSpec {
                gamma,
                tau0,
                c0: l.c0.or(base.map(|p| p.c0)).unwrap_or(1.0),
            });
        }
    } else {
        let (law, c0) = law_from_flags(cfg.law.as_ref(), &args.law)?;
        cfg.law = law;
        if c0.is_some() {
            cfg.c0 = c0;
        }
    }
    let mut top = RunConfig {
        grid: args.grid.as_deref().map(GridSpec::parse).transpose()?,
        r: args.r,
        c0: args.sound_speed,
        distances: args.distances.as_deref().map(config::parse_list).transpose()?,
        r0: args.r0,
        rank: args.rank,
        out: args.out.clone(),
        format: args.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        ..Default::default()
    };
    if args.radius.is_some() || args.amplitude.is_some() {
        let base = cfg.phantom_spec();
        top.phantom = Some(config::PhantomSpec {
            radius: args.radius.unwrap_or(base.radius),
            amplitude: args.amplitude.unwrap_or(base.amplitude),
        });
    }
    if let Some(b) = &args.band {
        let v = config::parse_list(b)?;
        if v.len() != 3 || v[2].fract() != 0.0 || v[2] < 0.0 {
            return Err(config_error("--band takes `min,max,points`"));
        }
        top.band = Some(config::BandSpec {
            omega_min: v[0],
            omega_max: v[1],
            points: v[2] as usize,
        });
    }
    if top.r0.is_some() {
        cfg.distances = None;
    }
    if top.distances.is_some() {
        cfg.r0 = None;
    }
    Ok(cfg.overlay(top))
}

/// Thread cap from `ATTENUO_THREADS`, defaulting to the available cores.
pub fn threads_from_env() -> anyhow::Result<usize> {
    match std::env::var("ATTENUO_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(config_error(format!("ATTENUO_THREADS=`{v}` is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Exit code for an error: 2 for configuration and domain errors, 3 for
/// numerical failures, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<attenuo::Error>() {
            return match e {
                attenuo::Error::Domain(_) => 2,
                _ => 3,
            };
        }
    }
    1
}

/// Execute a parsed command line; returns the report (if any) and the files
/// written.
pub fn execute(cli: &Cli) -> anyhow::Result<Option<(Value, Vec<PathBuf>)>> {
    let (command, args) = match &cli.command {
        CliCommand::Kernel(a) => (Command::Kernel, a),
        CliCommand::Lawcompare(a) => (Command::LawCompare, a),
        CliCommand::Svd(a) => (Command::Svd, a),
        CliCommand::ForwardInvert(a) => (Command::ForwardInvert, a),
        CliCommand::Presets => {
            for name in presets::NAMES {
                let p = preset(name).expect("listed presets exist");
                println!("{:<16} {:<10} {}", p.name, format!("{:?}", p.kind).to_lowercase(), p.description);
            }
            return Ok(None);
        }
    };
    let cfg = resolve(command, args)?;
    let opts = RunOptions {
        plot_script: args.plot_script,
        heatmap: !args.no_heatmap,
        threads: threads_from_env()?,
    };
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut out = OutputDir::new(dir, cfg.format());
    let report = run(command, &cfg, args.preset.as_deref(), &mut out, &opts)?;
    Ok(Some((report, out.written)))
}
