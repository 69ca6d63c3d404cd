//! Symmetric frequency grid, its dual time grid and the discrete Fourier
//! transforms approximating
//!
//! `F f(omega) = (2 pi)^(-1/2) * int e^{i omega t} f(t) dt`,
//! `F^-1 g(t) = (2 pi)^(-1/2) * int e^{-i omega t} g(omega) d omega`.
//!
//! The frequency samples are `omega_k = (k - n/2) d_omega` for `k = 0..n`, so
//! zero is a sample and index 0 holds the unpaired Nyquist bin. Time samples
//! are `t_j = j d_t` with `d_t = 2 pi / (n d_omega)`; indices `n/2..n`
//! represent the negative times `t_j - n d_t`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::{eval_alpha_star, AttenuationModel};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Paired frequency and time sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPair {
    pub n: usize,
    pub omega_max: f64,
    pub delta_omega: f64,
    pub delta_t: f64,
}

impl GridPair {
    /// `n` a power of two, at least 8, and `omega_max > 0`. The spacing is
    /// `2 omega_max / (n - 1)`.
    pub fn new(n: usize, omega_max: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::domain(format!("grid size must be a power of two >= 8, got {n}")));
        }
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(Error::domain("omega_max must be positive"));
        }
        let delta_omega = 2.0 * omega_max / (n as f64 - 1.0);
        let delta_t = 2.0 * PI / (n as f64 * delta_omega);
        Ok(Self {
            n,
            omega_max,
            delta_omega,
            delta_t,
        })
    }

    /// The grid used for the figures: 512 points up to 80 MHz.
    pub fn paper() -> Self {
        Self::new(512, 80.0).expect("valid preset")
    }

    pub fn omega(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.delta_omega
    }

    pub fn omega_samples(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.omega(k)).collect()
    }

    /// Index of `omega = 0`.
    pub fn zero_index(&self) -> usize {
        self.n / 2
    }

    /// Unsigned time `j d_t` in `[0, 2 pi / d_omega)`.
    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.delta_t
    }

    pub fn t_samples(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.time(j)).collect()
    }

    /// Time of index `j` with the upper half mapped to negative times.
    pub fn signed_time(&self, j: usize) -> f64 {
        if j < self.n / 2 {
            self.time(j)
        } else {
            (j as f64 - self.n as f64) * self.delta_t
        }
    }

    /// Length of the periodic time window.
    pub fn window(&self) -> f64 {
        self.n as f64 * self.delta_t
    }

    /// Largest resolved frequency magnitude, the Nyquist frequency.
    pub fn nyquist(&self) -> f64 {
        (self.n / 2) as f64 * self.delta_omega
    }

    /// Sample `f` on the non-negative frequencies and complete the grid by
    /// Hermitian symmetry. The Nyquist entry is the real part of `f(omega_N)`.
    pub fn sample_hermitian<F>(&self, mut f: F) -> Result<Vec<Complex64>>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let n = self.n;
        let h = n / 2;
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for k in h..n {
            v[k] = f(self.omega(k))?;
        }
        v[h].im = 0.0;
        for k in h + 1..n {
            v[n - k] = v[k].conj();
        }
        v[0] = Complex64::new(f(self.nyquist())?.re, 0.0);
        Ok(v)
    }

    /// `alpha*` sampled with exact Hermitian symmetry.
    pub fn sample_alpha_star(&self, model: &AttenuationModel) -> Result<Vec<Complex64>> {
        self.sample_hermitian(|w| eval_alpha_star(model, w))
    }
}

/// Real samples on the time grid, indexed as [`GridPair::time`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSignal {
    pub grid: GridPair,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(grid: GridPair, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Dimension(format!(
                "signal has {} samples, grid has {}",
                values.len(),
                grid.n
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples reordered by increasing signed time, with their times.
    pub fn centered(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n;
        let h = n / 2;
        let idx = (h..n).chain(0..h);
        let t = idx.clone().map(|j| self.grid.signed_time(j)).collect();
        let v = idx.map(|j| self.values[j]).collect();
        (t, v)
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.delta_t
    }
}

/// Complex samples on the frequency grid, indexed as [`GridPair::omega`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSpectrum {
    pub grid: GridPair,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    /// Set when `v(-omega) = conj v(omega)` and the Nyquist and zero bins are
    /// real.
    pub hermitian: bool,
}

impl SampledSpectrum {
    pub fn new(grid: GridPair, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Dimension(format!(
                "spectrum has {} samples, grid has {}",
                values.len(),
                grid.n
            )));
        }
        Ok(Self {
            grid,
            values,
            hermitian: false,
        })
    }

    /// Build a spectrum flagged Hermitian after checking the symmetry to
    /// `1e-10` relative to the largest magnitude.
    pub fn hermitian(grid: GridPair, values: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::new(grid, values)?;
        let n = grid.n;
        let scale = s.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tol = 1e-10 * scale;
        let mut worst: f64 = s.values[0].im.abs().max(s.values[n / 2].im.abs());
        for k in 1..n {
            worst = worst.max((s.values[n - k] - s.values[k].conj()).norm());
        }
        if worst > tol {
            return Err(Error::numerical(format!(
                "spectrum violates Hermitian symmetry by {worst:.3e}"
            )));
        }
        s.hermitian = true;
        Ok(s)
    }

    /// Project onto Hermitian spectra: `(v(omega) + conj v(-omega)) / 2` with
    /// the Nyquist bin replaced by its real part.
    pub fn symmetrized(&self) -> Self {
        let n = self.grid.n;
        let mut v = self.values.clone();
        for k in 1..n {
            v[k] = 0.5 * (self.values[k] + self.values[n - k].conj());
        }
        v[0] = Complex64::new(self.values[0].re, 0.0);
        Self {
            grid: self.grid,
            values: v,
            hermitian: true,
        }
    }
}

fn fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    plan.process(values);
}

fn alternate(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Complex inverse transform of arbitrary spectrum samples.
pub fn inverse_fourier_complex(spectrum: &SampledSpectrum) -> Vec<Complex64> {
    let g = spectrum.grid;
    let mut buf = spectrum.values.clone();
    fft(&mut buf, false);
    let c = g.delta_omega * INV_SQRT_2PI;
    buf.iter()
        .enumerate()
        .map(|(j, v)| v * (c * alternate(j)))
        .collect()
}

/// Inverse transform returning the real part and the imaginary residue
/// `max |Im| / max |Re|`. For Hermitian input a residue above `1e-8` is an
/// error.
pub fn inverse_fourier_with_residue(spectrum: &SampledSpectrum) -> Result<(SampledSignal, f64)> {
    let out = inverse_fourier_complex(spectrum);
    let max_re = out.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let max_im = out.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if out.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::numerical("inverse transform produced non-finite values"));
    }
    let residue = if max_re > 0.0 {
        max_im / max_re
    } else if max_im > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    if spectrum.hermitian && residue > 1e-8 {
        return Err(Error::numerical(format!(
            "imaginary residue {residue:.3e} of a Hermitian spectrum exceeds 1e-8"
        )));
    }
    let sig = SampledSignal::new(spectrum.grid, out.iter().map(|v| v.re).collect())?;
    Ok((sig, residue))
}

pub fn inverse_fourier(spectrum: &SampledSpectrum) -> Result<SampledSignal> {
    inverse_fourier_with_residue(spectrum).map(|(s, _)| s)
}

/// Forward transform of a real signal. The result is Hermitian.
pub fn forward_fourier(signal: &SampledSignal) -> SampledSpectrum {
    let g = signal.grid;
    let mut buf: Vec<Complex64> = signal
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| Complex64::new(v * alternate(j), 0.0))
        .collect();
    fft(&mut buf, true);
    let c = g.delta_t * INV_SQRT_2PI;
    for v in &mut buf {
        *v *= c;
    }
    // Exact symmetry: real input gives conjugate pairs up to rounding.
    SampledSpectrum {
        grid: g,
        values: buf,
        hermitian: false,
    }
    .symmetrized()
}

/// Hilbert transform `(1/pi) PV int f(s) / (t - s) ds` of a periodic signal.
///
/// With the sign convention of this module it is multiplication of the
/// spectrum by `i sgn(omega)`, so `cos` maps to `sin`. The zero and Nyquist
/// bins are dropped, hence applying it twice negates the part of the signal
/// without those two components.
pub fn hilbert(signal: &SampledSignal) -> Result<SampledSignal> {
    let mut s = forward_fourier(signal);
    let h = s.grid.n / 2;
    for (k, v) in s.values.iter_mut().enumerate() {
        *v *= match k.cmp(&h) {
            _ if k == 0 => Complex64::new(0.0, 0.0),
            std::cmp::Ordering::Less => Complex64::new(0.0, -1.0),
            std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
            std::cmp::Ordering::Greater => Complex64::new(0.0, 1.0),
        };
    }
    inverse_fourier(&s)
}

/// Spectral window applied before a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    None,
    /// Raised cosine over the full band, `(1 + cos(pi omega / omega_N)) / 2`.
    Hann,
}

impl Taper {
    pub fn weight(&self, grid: &GridPair, omega: f64) -> f64 {
        match self {
            Taper::None => 1.0,
            Taper::Hann => 0.5 * (1.0 + (PI * omega / grid.nyquist()).cos()),
        }
    }

    pub fn apply(&self, spectrum: &mut SampledSpectrum) {
        if *self == Taper::None {
            return;
        }
        let g = spectrum.grid;
        for (k, v) in spectrum.values.iter_mut().enumerate() {
            *v *= self.weight(&g, g.omega(k));
        }
    }
}

/// Kramers-Kronig consistency of a law on a grid.
///
/// The imaginary part predicted from `Re alpha*` by the causal relation,
/// `Im F{sgn(t) F^-1{Re alpha*}}`, is compared with `Im alpha*` on the inner
/// 80 % of the band. The norm of the difference is divided by the larger of
/// the two norms, so the value lies in `[0, 2]`, is 1 for a purely real law
/// and 0 for the lossless law.
pub fn kramers_kronig_residual(model: &AttenuationModel, grid: &GridPair, taper: Taper) -> Result<f64> {
    let alpha = grid.sample_alpha_star(model)?;
    let n = grid.n;
    let w: Vec<f64> = (0..n).map(|k| taper.weight(grid, grid.omega(k))).collect();
    let re: Vec<Complex64> = alpha
        .iter()
        .zip(&w)
        .map(|(a, w)| Complex64::new(a.re * w, 0.0))
        .collect();
    let even = inverse_fourier(&SampledSpectrum::hermitian(*grid, re)?)?;
    let odd: Vec<f64> = even
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let t = grid.signed_time(j);
            v * if t > 0.0 {
                1.0
            } else if t < 0.0 {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    let pred = forward_fourier(&SampledSignal::new(*grid, odd)?);
    let band = 0.8 * grid.nyquist();
    let (mut diff, mut ni, mut np) = (0.0, 0.0, 0.0);
    for k in 0..n {
        if grid.omega(k).abs() > band {
            continue;
        }
        let im = alpha[k].im * w[k];
        let p = pred.values[k].im;
        diff += (im - p).powi(2);
        ni += im * im;
        np += p * p;
    }
    let denom = ni.max(np).sqrt();
    if denom == 0.0 {
        return Ok(0.0);
    }
    let r = diff.sqrt() / denom;
    if !r.is_finite() {
        return Err(Error::numerical("Kramers-Kronig residual is not finite"));
    }
    Ok(r)
}

/// Fraction of the signal energy at negative times more than `guard` samples
/// before zero: indices `n/2 .. n - guard` over all indices.
pub fn pre_arrival_fraction(signal: &SampledSignal, guard: usize) -> f64 {
    pre_arrival_fraction_shifted(signal, 0, guard)
}

/// As [`pre_arrival_fraction`] with time zero moved to `arrival`, rounded down
/// to the grid.
pub fn pre_arrival_fraction_after(signal: &SampledSignal, arrival: f64, guard: usize) -> f64 {
    let shift = (arrival / signal.grid.delta_t).floor().max(0.0) as usize;
    pre_arrival_fraction_shifted(signal, shift, guard)
}

fn pre_arrival_fraction_shifted(signal: &SampledSignal, shift: usize, guard: usize) -> f64 {
    let n = signal.grid.n;
    let total: f64 = signal.values.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return 0.0;
    }
    let end = n.saturating_sub(guard).max(n / 2);
    let pre: f64 = (n / 2..end)
        .map(|j| signal.values[(j + shift) % n].powi(2))
        .sum();
    pre / total
}
