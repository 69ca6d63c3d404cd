//! The four experiments. Each writes its data files and a JSON report.

use std::f64::consts::PI;

use attenuo::{
    build_matrix, causality_report, default_n_cells, forward_apply, halfplane_sign_scan, invert_with,
    kernel_k, p0_nodal, p0_support, svd_analyze, AttenuationModel, BallPhantom, CausalityReport,
    DetectorGeometry, GridPair, Law, SignScanReport, TruncatedSvd,
};
use serde::Serialize;

use crate::config::{config_error, BandSpec, PhantomSpec, RunConfig};
use crate::output::{OutputDir, Table, PLOT_SCRIPT};

pub const SCHEMA_VERSION: u32 = 1;
pub const CAUSALITY_GUARD: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Kernel,
    LawCompare,
    Svd,
    ForwardInvert,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::LawCompare => "lawcompare",
            Command::Svd => "svd",
            Command::ForwardInvert => "forward-invert",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub plot_script: bool,
    /// Write the `|M^|` heat maps of the svd command.
    pub heatmap: bool,
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            plot_script: false,
            heatmap: true,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub n: usize,
    pub omega_max: f64,
    pub delta_omega: f64,
    pub delta_t: f64,
}

impl From<&GridPair> for GridInfo {
    fn from(g: &GridPair) -> Self {
        Self {
            n: g.n,
            omega_max: g.omega_max,
            delta_omega: g.delta_omega,
            delta_t: g.delta_t,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub preset: Option<String>,
    pub law: Law,
    pub r: f64,
    pub grid: GridInfo,
    pub imag_residue: f64,
    pub causality: CausalityReport,
    pub halfplane_scan: SignScanReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawCompareReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub preset: Option<String>,
    pub gamma: f64,
    pub tau0: f64,
    pub c0: f64,
    pub alpha0: f64,
    pub band: BandSpec,
    /// `|alpha_ksb - alpha_pl| / alpha_pl` at the first positive frequency.
    pub low_end_rel_diff: f64,
    pub max_rel_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SvdRun {
    pub distance: f64,
    pub r0: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_cut: usize,
    pub tail_decay_rate: Option<f64>,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SvdCommandReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub preset: Option<String>,
    pub law: Law,
    pub c0: f64,
    pub grid: GridInfo,
    pub phantom: PhantomSpec,
    pub cutoff_ratio: f64,
    pub runs: Vec<SvdRun>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForwardInvertRun {
    pub distance: f64,
    pub r0: f64,
    pub n_cut: usize,
    pub rank_used: usize,
    /// `sigma_1 / sigma_rank`.
    pub sigma_ratio: f64,
    pub round_trip_rel_l2: f64,
    pub relative_residual: f64,
    pub imag_residue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForwardInvertReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub preset: Option<String>,
    pub law: Law,
    pub c0: f64,
    pub grid: GridInfo,
    pub phantom: PhantomSpec,
    pub runs: Vec<ForwardInvertRun>,
}

/// Run `command` and return its report as JSON.
pub fn run(
    command: Command,
    cfg: &RunConfig,
    preset: Option<&str>,
    out: &mut OutputDir,
    opts: &RunOptions,
) -> anyhow::Result<serde_json::Value> {
    let preset = preset.map(str::to_owned);
    let report = match command {
        Command::Kernel => serde_json::to_value(cmd_kernel(cfg, preset, out)?)?,
        Command::LawCompare => serde_json::to_value(cmd_lawcompare(cfg, preset, out)?)?,
        Command::Svd => serde_json::to_value(cmd_svd(cfg, preset, out, opts)?)?,
        Command::ForwardInvert => serde_json::to_value(cmd_forward_invert(cfg, preset, out, opts)?)?,
    };
    if opts.plot_script {
        out.raw("plot.py", PLOT_SCRIPT.as_bytes())?;
    }
    Ok(report)
}

fn scan_radii() -> Vec<f64> {
    (0..25).map(|i| 10f64.powf(-2.0 + 0.25 * i as f64)).collect()
}

fn scan_angles() -> Vec<f64> {
    (0..=36).map(|i| PI * i as f64 / 36.0).collect()
}

pub fn cmd_kernel(cfg: &RunConfig, preset: Option<String>, out: &mut OutputDir) -> anyhow::Result<KernelReport> {
    let law = cfg.require_law()?.clone();
    let model = AttenuationModel::new(law.clone())?;
    let grid = cfg.grid_pair()?;
    let r = cfg.r.unwrap_or(0.25);
    let k = kernel_k(&model, r, &grid)?;
    let causality = causality_report(&model, r, &grid, CAUSALITY_GUARD)?;
    let halfplane_scan = halfplane_sign_scan(&model, &scan_radii(), &scan_angles())?;
    let (t, v) = k.signal.centered();
    out.table("kernel", &Table::new(&["t", "K"], vec![t, v]))?;
    let report = KernelReport {
        schema_version: SCHEMA_VERSION,
        command: "kernel",
        preset,
        law,
        r,
        grid: (&grid).into(),
        imag_residue: k.imag_residue,
        causality,
        halfplane_scan,
    };
    out.report("kernel_report.json", &report)?;
    Ok(report)
}

/// KSB `alpha0` for which the law matches `|tau0 omega|^gamma` at low frequency.
pub fn paired_alpha0(gamma: f64, tau0: f64, c0: f64) -> f64 {
    2.0 * c0 * tau0 / (PI * gamma / 2.0).cos().abs()
}

pub fn cmd_lawcompare(
    cfg: &RunConfig,
    preset: Option<String>,
    out: &mut OutputDir,
) -> anyhow::Result<LawCompareReport> {
    let p = cfg
        .pairing
        .ok_or_else(|| config_error("lawcompare needs --gamma and --tau0 (or a fig4 preset)"))?;
    let band = cfg.band.unwrap_or(BandSpec::EXPERIMENT);
    let omegas = band.samples()?;
    let alpha0 = paired_alpha0(p.gamma, p.tau0, p.c0);
    let ksb = AttenuationModel::ksb(p.gamma, alpha0, p.tau0, p.c0)?;
    let mut a_ksb = Vec::with_capacity(omegas.len());
    let mut a_pl = Vec::with_capacity(omegas.len());
    for &w in &omegas {
        a_ksb.push(attenuo::attenuation_law(&ksb, w)?);
        a_pl.push((p.tau0 * w).abs().powf(p.gamma));
    }
    let rel: Vec<f64> = a_ksb
        .iter()
        .zip(&a_pl)
        .filter(|(_, pl)| **pl > 0.0)
        .map(|(k, pl)| (k - pl).abs() / pl)
        .collect();
    let low_end_rel_diff = *rel
        .first()
        .ok_or_else(|| config_error("band has no positive frequency"))?;
    let max_rel_diff = rel.iter().copied().fold(0.0, f64::max);
    out.table(
        "lawcompare",
        &Table::new(&["omega", "alpha_ksb", "alpha_pl"], vec![omegas, a_ksb, a_pl]),
    )?;
    let report = LawCompareReport {
        schema_version: SCHEMA_VERSION,
        command: "lawcompare",
        preset,
        gamma: p.gamma,
        tau0: p.tau0,
        c0: p.c0,
        alpha0,
        band,
        low_end_rel_diff,
        max_rel_diff,
    };
    out.report("lawcompare_report.json", &report)?;
    Ok(report)
}

struct Medium {
    law: Law,
    model: AttenuationModel,
    c0: f64,
    grid: GridPair,
    phantom_spec: PhantomSpec,
    phantom: BallPhantom,
}

fn medium(cfg: &RunConfig) -> anyhow::Result<Medium> {
    let law = cfg.require_law()?.clone();
    let model = AttenuationModel::new(law.clone())?;
    let c0 = cfg
        .c0
        .or_else(|| model.c0())
        .ok_or_else(|| config_error("this law has no sound speed; pass --sound-speed"))?;
    let phantom_spec = cfg.phantom_spec();
    let phantom = BallPhantom::new(phantom_spec.radius, phantom_spec.amplitude)?;
    Ok(Medium {
        law,
        model,
        c0,
        grid: cfg.grid_pair()?,
        phantom_spec,
        phantom,
    })
}

fn file_tag(l: f64) -> String {
    format!("L{l}")
}

/// Apply `f` to every item on at most `threads` scoped threads, keeping order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> anyhow::Result<R> + Sync,
) -> anyhow::Result<Vec<R>> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<anyhow::Result<R>>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(threads)
                        .map(|(i, x)| (i, f(x)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every item is processed")).collect()
}

struct SvdWork {
    run: SvdRun,
    sigma: Vec<f64>,
    heat: Option<Table>,
}

pub fn cmd_svd(
    cfg: &RunConfig,
    preset: Option<String>,
    out: &mut OutputDir,
    opts: &RunOptions,
) -> anyhow::Result<SvdCommandReport> {
    let m = medium(cfg)?;
    let distances = cfg.surface_distances()?;
    let work = par_map(&distances, opts.threads, |&l| {
        let det = DetectorGeometry::at_surface_distance(&m.phantom, l, m.c0)?;
        let support = p0_support(&m.phantom, &det)?;
        let matrix = build_matrix(&m.model, m.c0, &m.grid, support, default_n_cells(&m.grid, support))?;
        let rep = svd_analyze(&matrix)?;
        let heat = opts.heatmap.then(|| {
            let mut header: Vec<String> = vec!["omega".into()];
            header.extend(matrix.nodes.iter().map(|t| format!("t{t:.6}")));
            let mut columns = vec![m.grid.omega_samples()];
            for c in 0..matrix.n_cols() {
                columns.push(matrix.entries.column(c).iter().map(|z| z.norm()).collect());
            }
            Table { header, columns }
        });
        Ok(SvdWork {
            run: SvdRun {
                distance: l,
                r0: det.r0,
                n_rows: rep.n_rows,
                n_cols: rep.n_cols,
                n_cut: rep.n_cut,
                tail_decay_rate: rep.tail_decay_rate,
                sigma_max: rep.singular_values[0],
                sigma_min: *rep.singular_values.last().expect("non-empty spectrum"),
            },
            sigma: rep.singular_values,
            heat,
        })
    })?;
    let mut runs = Vec::with_capacity(work.len());
    for w in work {
        let tag = file_tag(w.run.distance);
        let idx = (1..=w.sigma.len()).map(|i| i as f64).collect();
        out.table(&format!("sigma_{tag}"), &Table::new(&["index", "sigma"], vec![idx, w.sigma]))?;
        if let Some(h) = &w.heat {
            out.table(&format!("heatmap_{tag}"), h)?;
        }
        runs.push(w.run);
    }
    let report = SvdCommandReport {
        schema_version: SCHEMA_VERSION,
        command: "svd",
        preset,
        law: m.law,
        c0: m.c0,
        grid: (&m.grid).into(),
        phantom: m.phantom_spec,
        cutoff_ratio: attenuo::propagator::CUTOFF_RATIO,
        runs,
    };
    out.report("svd_report.json", &report)?;
    Ok(report)
}

struct RoundTrip {
    run: ForwardInvertRun,
    nodes: Vec<f64>,
    p0: Vec<f64>,
    p_att: (Vec<f64>, Vec<f64>),
    p0_rec: Vec<f64>,
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

pub fn cmd_forward_invert(
    cfg: &RunConfig,
    preset: Option<String>,
    out: &mut OutputDir,
    opts: &RunOptions,
) -> anyhow::Result<ForwardInvertReport> {
    let m = medium(cfg)?;
    let distances = cfg.surface_distances()?;
    let work = par_map(&distances, opts.threads, |&l| {
        let det = DetectorGeometry::at_surface_distance(&m.phantom, l, m.c0)?;
        let support = p0_support(&m.phantom, &det)?;
        let matrix = build_matrix(&m.model, m.c0, &m.grid, support, default_n_cells(&m.grid, support))?;
        let p0 = matrix
            .nodes
            .iter()
            .map(|t| p0_nodal(&m.phantom, &det, *t))
            .collect::<attenuo::Result<Vec<_>>>()?;
        let fw = forward_apply(&matrix, &p0)?;
        let svd = TruncatedSvd::new(&matrix)?;
        let inv = invert_with(&matrix, &svd, &fw.spectrum, cfg.rank)?;
        Ok(RoundTrip {
            run: ForwardInvertRun {
                distance: l,
                r0: det.r0,
                n_cut: svd.n_cut(),
                rank_used: inv.rank,
                sigma_ratio: inv.amplification,
                round_trip_rel_l2: rel_l2(&inv.p0, &p0),
                relative_residual: inv.relative_residual,
                imag_residue: inv.imag_residue,
            },
            nodes: matrix.nodes.clone(),
            p0,
            p_att: (m.grid.t_samples(), fw.signal.values),
            p0_rec: inv.p0,
        })
    })?;
    let mut runs = Vec::with_capacity(work.len());
    for w in work {
        let tag = file_tag(w.run.distance);
        out.table(&format!("p0_{tag}"), &Table::new(&["t", "p0"], vec![w.nodes.clone(), w.p0]))?;
        out.table(&format!("p_att_{tag}"), &Table::new(&["t", "p_att"], vec![w.p_att.0, w.p_att.1]))?;
        out.table(&format!("p0_rec_{tag}"), &Table::new(&["t", "p0_rec"], vec![w.nodes, w.p0_rec]))?;
        runs.push(w.run);
    }
    let report = ForwardInvertReport {
        schema_version: SCHEMA_VERSION,
        command: "forward-invert",
        preset,
        law: m.law,
        c0: m.c0,
        grid: (&m.grid).into(),
        phantom: m.phantom_spec,
        runs,
    };
    out.report("forward_invert_report.json", &report)?;
    Ok(report)
}
