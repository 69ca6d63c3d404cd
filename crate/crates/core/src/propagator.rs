//! The operator mapping the attenuation-free trace `p0` to attenuated data.
//!
//! In the frequency domain the data are
//! `p^(omega) = int M^(omega, t') p0(t') dt'` with
//! `M^(omega, t') = (2 pi)^(-1/2) i omega e^{s t'} / s`,
//! `s = -alpha*(omega) c0 + i omega`.
//! Discretising `t'` over the support of `p0` gives a complex matrix whose
//! singular values measure how ill-posed recovering `p0` is.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::{eval_alpha_star, least_squares_slope, AttenuationModel};
use crate::spectral::{inverse_fourier, GridPair, SampledSignal, SampledSpectrum};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_c0(c0: f64) -> Result<()> {
    if c0.is_finite() && c0 > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("sound speed c0 must be positive"))
    }
}

/// `lim_{omega -> 0} i omega / s`, averaged over the two one-sided limits.
fn zero_frequency_ratio(model: &AttenuationModel, c0: f64) -> Result<Complex64> {
    let sides = model.low_frequency_limits()?;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in sides {
        if let Some(l) = l {
            acc += 1.0 / (1.0 + c0 * l);
        }
    }
    Ok(acc * 0.5)
}

fn exponent(model: &AttenuationModel, c0: f64, omega: f64) -> Result<Complex64> {
    let s = -eval_alpha_star(model, omega)? * c0 + I * omega;
    if s.norm() <= 1e-300 {
        return Err(Error::numerical(format!("vanishing denominator at omega = {omega}")));
    }
    Ok(s)
}

/// One kernel value `M^(omega, t')`. At `omega = 0` the limit along the real
/// axis is used.
pub fn mhat_entry(model: &AttenuationModel, c0: f64, omega: f64, t_prime: f64) -> Result<Complex64> {
    check_c0(c0)?;
    if omega == 0.0 {
        return Ok(zero_frequency_ratio(model, c0)? * INV_SQRT_2PI);
    }
    let s = exponent(model, c0, omega)?;
    let v = INV_SQRT_2PI * I * omega * (s * t_prime).exp() / s;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::numerical(format!("kernel overflow at omega = {omega}, t' = {t_prime}")))
    }
}

/// `M(., t') = F^-1{M^(., t')}` on the time grid, so that the lossless
/// kernel is `delta(t - t')`.
pub fn m_time_kernel(
    model: &AttenuationModel,
    c0: f64,
    t_prime: f64,
    grid: &GridPair,
) -> Result<SampledSignal> {
    let v = grid.sample_hermitian(|w| mhat_entry(model, c0, w, t_prime))?;
    inverse_fourier(&SampledSpectrum::hermitian(*grid, v)?)
}

/// The limit kernel `F(t, infinity) = (2 pi)^(-1/2) F^-1{-i omega / (-alpha* + i omega / c0)}`.
///
/// Its spectrum equals `-c0 M^(omega, 0)`; it is evaluated from its own
/// formula so that identity can serve as a check.
pub fn f_infinity(model: &AttenuationModel, c0: f64, grid: &GridPair) -> Result<SampledSignal> {
    check_c0(c0)?;
    let sides = model.low_frequency_limits()?;
    let v = grid.sample_hermitian(|w| {
        if w == 0.0 {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in sides.iter().flatten() {
                acc += -c0 / (1.0 + c0 * l);
            }
            return Ok(acc * 0.5 * INV_SQRT_2PI);
        }
        let d = -eval_alpha_star(model, w)? + I * w / c0;
        Ok(INV_SQRT_2PI * (-I * w) / d)
    })?;
    inverse_fourier(&SampledSpectrum::hermitian(*grid, v)?)
}

/// Discretised propagator: rows are the frequency samples of the grid,
/// columns are equispaced nodes `t_min = t_0 < ... < t_N = t_max`.
///
/// `p0` is represented by linear interpolation between its node values and
/// each hat function is integrated exactly against `M^(omega, t')`, so the
/// matrix is exact for piecewise-linear traces such as the N-wave.
#[derive(Debug, Clone)]
pub struct PropagatorMatrix {
    pub law: &'static str,
    pub c0: f64,
    pub grid: GridPair,
    pub support: (f64, f64),
    pub cell_width: f64,
    pub nodes: Vec<f64>,
    pub entries: DMatrix<Complex64>,
}

impl PropagatorMatrix {
    pub fn n_rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.entries.ncols()
    }

    /// Distance `c0 t_min` from detector to the nearest point of the source.
    pub fn detector_distance(&self) -> f64 {
        self.c0 * self.support.0
    }

    pub fn svd(&self) -> Result<TruncatedSvd> {
        TruncatedSvd::new(self)
    }
}

/// Default number of cells: the support length in units of the time step.
pub fn default_n_cells(grid: &GridPair, support: (f64, f64)) -> usize {
    (((support.1 - support.0) / grid.delta_t).round() as usize).max(1)
}

/// `e^z - 1` without cancellation for small `|z|`.
fn expm1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

fn series(x: Complex64, coeffs: &[f64]) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// `int_0^1 e^{x v} (1 - v) dv = (e^x - 1 - x) / x^2`.
fn ramp_down(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        series(x, &[1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0, 1.0 / 720.0, 1.0 / 5040.0])
    } else {
        (expm1(x) - x) / (x * x)
    }
}

/// `int_0^1 e^{x v} v dv = (x e^x - e^x + 1) / x^2`.
fn ramp_up(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        series(x, &[1.0 / 2.0, 1.0 / 3.0, 1.0 / 8.0, 1.0 / 30.0, 1.0 / 144.0, 1.0 / 840.0])
    } else {
        (x * x.exp() - expm1(x)) / (x * x)
    }
}

/// `(e^x - 1) / x`.
fn phi1(x: Complex64) -> Complex64 {
    if x.norm() < 1e-8 {
        1.0 + 0.5 * x
    } else {
        expm1(x) / x
    }
}

/// Assemble the propagator over `support = (t_min, t_max)` with `n_cells`
/// cells, hence `n_cells + 1` columns.
pub fn build_matrix(
    model: &AttenuationModel,
    c0: f64,
    grid: &GridPair,
    support: (f64, f64),
    n_cells: usize,
) -> Result<PropagatorMatrix> {
    check_c0(c0)?;
    let (t0, t1) = support;
    if !(t0.is_finite() && t1.is_finite() && t0 >= 0.0 && t1 > t0) {
        return Err(Error::domain("support must satisfy 0 <= t_min < t_max"));
    }
    if n_cells == 0 {
        return Err(Error::domain("matrix needs at least one cell"));
    }
    let n = grid.n;
    let h = (t1 - t0) / n_cells as f64;
    let nodes: Vec<f64> = (0..=n_cells).map(|j| t0 + j as f64 * h).collect();
    let zero_ratio = zero_frequency_ratio(model, c0)?;
    let mut m = DMatrix::<Complex64>::zeros(n, n_cells + 1);

    let row = |omega: f64| -> Result<Vec<Complex64>> {
        if omega == 0.0 {
            let full = zero_ratio * INV_SQRT_2PI * h;
            let mut r = vec![full; n_cells + 1];
            r[0] *= 0.5;
            r[n_cells] *= 0.5;
            return Ok(r);
        }
        let s = exponent(model, c0, omega)?;
        let x = s * h;
        let pre = INV_SQRT_2PI * I * omega / s * h;
        let p = phi1(x);
        let interior = p * p;
        let r: Vec<Complex64> = (0..=n_cells)
            .map(|j| {
                if j == 0 {
                    pre * (s * t0).exp() * ramp_down(x)
                } else if j == n_cells {
                    pre * (s * nodes[j - 1]).exp() * ramp_up(x)
                } else {
                    pre * (s * nodes[j - 1]).exp() * interior
                }
            })
            .collect();
        if r.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::numerical(format!("matrix entry overflow at omega = {omega}")));
        }
        Ok(r)
    };

    for k in n / 2..n {
        let r = row(grid.omega(k))?;
        for (j, v) in r.into_iter().enumerate() {
            m[(k, j)] = v;
            if k > n / 2 {
                m[(n - k, j)] = v.conj();
            }
        }
    }
    let nyq = row(grid.nyquist())?;
    for (j, v) in nyq.into_iter().enumerate() {
        m[(0, j)] = Complex64::new(v.re, 0.0);
    }

    Ok(PropagatorMatrix {
        law: model.name(),
        c0,
        grid: *grid,
        support,
        cell_width: h,
        nodes,
        entries: m,
    })
}

/// Attenuated data produced by [`forward_apply`].
#[derive(Debug, Clone)]
pub struct ForwardResult {
    pub spectrum: SampledSpectrum,
    pub signal: SampledSignal,
}

/// Apply the propagator to `p0` sampled at the matrix nodes.
pub fn forward_apply(matrix: &PropagatorMatrix, p0: &[f64]) -> Result<ForwardResult> {
    if p0.len() != matrix.n_cols() {
        return Err(Error::Dimension(format!(
            "p0 has {} samples, matrix has {} columns",
            p0.len(),
            matrix.n_cols()
        )));
    }
    let x = DVector::from_iterator(p0.len(), p0.iter().map(|v| Complex64::new(*v, 0.0)));
    let y = &matrix.entries * x;
    let spectrum = SampledSpectrum::new(matrix.grid, y.iter().copied().collect())?.symmetrized();
    let signal = inverse_fourier(&spectrum)?;
    Ok(ForwardResult { spectrum, signal })
}

/// Relative threshold defining the numerical rank.
pub const CUTOFF_RATIO: f64 = 1e-3;

/// Singular value summary of a propagator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SvdReport {
    pub law: &'static str,
    pub n_rows: usize,
    pub n_cols: usize,
    pub grid_n: usize,
    pub omega_max: f64,
    pub detector_distance: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub cutoff_ratio: f64,
    /// Number of singular values at least `cutoff_ratio * sigma_1`.
    pub n_cut: usize,
    /// Minus the least-squares slope of `ln sigma_i` against `i` over the
    /// trailing half of the values above `1e-12 sigma_1`.
    pub tail_decay_rate: Option<f64>,
}

fn n_cut(sv: &[f64]) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().filter(|s| **s >= CUTOFF_RATIO * s1).count(),
        _ => 0,
    }
}

fn tail_decay_rate(sv: &[f64]) -> Option<f64> {
    let s1 = *sv.first()?;
    let kept: Vec<f64> = sv.iter().copied().filter(|s| *s >= 1e-12 * s1).collect();
    let start = kept.len() / 2;
    let pts: Vec<(f64, f64)> = kept[start..]
        .iter()
        .enumerate()
        .map(|(i, s)| ((start + i) as f64, s.ln()))
        .collect();
    least_squares_slope(&pts).map(|s| -s)
}

/// Full SVD of a propagator, sorted by decreasing singular value.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    u: DMatrix<Complex64>,
    v_t: DMatrix<Complex64>,
    pub singular_values: Vec<f64>,
}

impl TruncatedSvd {
    pub fn new(matrix: &PropagatorMatrix) -> Result<Self> {
        if matrix.entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::numerical("matrix has non-finite entries"));
        }
        let svd = matrix.entries.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v)) => (u, v),
            _ => return Err(Error::numerical("SVD did not return singular vectors")),
        };
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|a, b| svd.singular_values[*b].total_cmp(&svd.singular_values[*a]));
        let singular_values: Vec<f64> = order.iter().map(|i| svd.singular_values[*i]).collect();
        let u = DMatrix::from_columns(&order.iter().map(|i| u.column(*i)).collect::<Vec<_>>());
        let v_t = DMatrix::from_rows(&order.iter().map(|i| v_t.row(*i)).collect::<Vec<_>>());
        Ok(Self {
            u,
            v_t,
            singular_values,
        })
    }

    pub fn n_cut(&self) -> usize {
        n_cut(&self.singular_values)
    }

    /// Minimum-norm solution using the leading `rank` singular triplets.
    pub fn solve(&self, b: &[Complex64], rank: usize) -> Result<Vec<Complex64>> {
        if b.len() != self.u.nrows() {
            return Err(Error::Dimension(format!(
                "data has {} samples, matrix has {} rows",
                b.len(),
                self.u.nrows()
            )));
        }
        if rank == 0 || rank > self.singular_values.len() {
            return Err(Error::domain(format!(
                "rank must lie in 1..={}",
                self.singular_values.len()
            )));
        }
        if self.singular_values[rank - 1] <= 0.0 {
            return Err(Error::numerical("truncation keeps a zero singular value"));
        }
        let b = DVector::from_column_slice(b);
        let coeff = self.u.columns(0, rank).adjoint() * b;
        let scaled = DVector::from_iterator(
            rank,
            coeff
                .iter()
                .zip(&self.singular_values)
                .map(|(c, s)| c / *s),
        );
        let x = self.v_t.rows(0, rank).adjoint() * scaled;
        Ok(x.iter().copied().collect())
    }
}

/// Singular values, numerical rank and tail decay of a propagator.
pub fn svd_analyze(matrix: &PropagatorMatrix) -> Result<SvdReport> {
    if matrix.entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::numerical("matrix has non-finite entries"));
    }
    let mut sv: Vec<f64> = matrix.entries.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(SvdReport {
        law: matrix.law,
        n_rows: matrix.n_rows(),
        n_cols: matrix.n_cols(),
        grid_n: matrix.grid.n,
        omega_max: matrix.grid.omega_max,
        detector_distance: matrix.detector_distance(),
        n_cut: n_cut(&sv),
        tail_decay_rate: tail_decay_rate(&sv),
        singular_values: sv,
        cutoff_ratio: CUTOFF_RATIO,
    })
}

/// Result of a truncated-SVD reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inversion {
    /// Reconstructed `p0` at the matrix nodes.
    pub p0: Vec<f64>,
    pub nodes: Vec<f64>,
    pub rank: usize,
    /// `||M x - b|| / ||b||`.
    pub relative_residual: f64,
    /// `sigma_1 / sigma_rank`, the worst-case noise amplification.
    pub amplification: f64,
    /// Largest imaginary part of the solution relative to its largest real part.
    pub imag_residue: f64,
}

/// Reconstruct `p0` from attenuated spectral data, keeping `rank` singular
/// values (`n_cut` when `None`).
pub fn invert_truncated(
    matrix: &PropagatorMatrix,
    data: &SampledSpectrum,
    rank: Option<usize>,
) -> Result<Inversion> {
    let svd = matrix.svd()?;
    invert_with(matrix, &svd, data, rank)
}

/// As [`invert_truncated`] reusing a precomputed decomposition.
pub fn invert_with(
    matrix: &PropagatorMatrix,
    svd: &TruncatedSvd,
    data: &SampledSpectrum,
    rank: Option<usize>,
) -> Result<Inversion> {
    if data.grid != matrix.grid {
        return Err(Error::Dimension("data and matrix use different grids".into()));
    }
    let rank = rank.unwrap_or_else(|| svd.n_cut());
    let x = svd.solve(&data.values, rank)?;
    let xv = DVector::from_column_slice(&x);
    let r = &matrix.entries * xv;
    let bnorm = data.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let rnorm = r
        .iter()
        .zip(&data.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let max_re = x.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let max_im = x.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    Ok(Inversion {
        p0: x.iter().map(|v| v.re).collect(),
        nodes: matrix.nodes.clone(),
        rank,
        relative_residual: if bnorm > 0.0 { rnorm / bnorm } else { 0.0 },
        amplification: svd.singular_values[0] / svd.singular_values[rank - 1],
        imag_residue: if max_re > 0.0 { max_im / max_re } else { 0.0 },
    })
}
