//! Uniform ball phantom and the pressure trace it produces at a point
//! detector without attenuation.
//!
//! For a ball of radius `R` and amplitude `A` centred at distance `R0` from the
//! detector the trace is the N-wave
//! `p0(t) = A c0^2 (R0 - c0 t) / (2 R0)` on `[(R0 - R)/c0, (R0 + R)/c0]`,
//! obtained from `p0(t) = d/dt [c0^2 t M(c0 t)]` with `M(rho)` the mean of the
//! initial pressure over the sphere of radius `rho` about the detector.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{GridPair, SampledSignal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallPhantom {
    pub radius: f64,
    pub amplitude: f64,
}

impl BallPhantom {
    pub fn new(radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain("ball radius must be positive"));
        }
        if !amplitude.is_finite() {
            return Err(Error::domain("ball amplitude must be finite"));
        }
        Ok(Self { radius, amplitude })
    }
}

/// Point detector at distance `r0` from the ball centre in a medium with
/// sound speed `c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorGeometry {
    pub r0: f64,
    pub c0: f64,
}

impl DetectorGeometry {
    pub fn new(r0: f64, c0: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::domain("detector distance must be positive"));
        }
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::domain("sound speed must be positive"));
        }
        Ok(Self { r0, c0 })
    }

    /// Detector at distance `l` from the ball surface.
    pub fn at_surface_distance(phantom: &BallPhantom, l: f64, c0: f64) -> Result<Self> {
        if !(l.is_finite() && l >= 0.0) {
            return Err(Error::domain("surface distance must be >= 0"));
        }
        Self::new(phantom.radius + l, c0)
    }
}

fn check_outside(ph: &BallPhantom, det: &DetectorGeometry) -> Result<()> {
    if det.r0 < ph.radius {
        return Err(Error::domain(format!(
            "detector at distance {} lies inside the ball of radius {}",
            det.r0, ph.radius
        )));
    }
    Ok(())
}

/// Time interval on which the trace is non-zero.
pub fn p0_support(ph: &BallPhantom, det: &DetectorGeometry) -> Result<(f64, f64)> {
    check_outside(ph, det)?;
    Ok((
        (det.r0 - ph.radius) / det.c0,
        (det.r0 + ph.radius) / det.c0,
    ))
}

/// The N-wave at time `t`, with half the one-sided limit at the two jumps.
pub fn p0_value(ph: &BallPhantom, det: &DetectorGeometry, t: f64) -> Result<f64> {
    let (a, b) = p0_support(ph, det)?;
    let inner = ph.amplitude * det.c0 * det.c0 * (det.r0 - det.c0 * t) / (2.0 * det.r0);
    let eps = 1e-12 * b.max(1.0);
    Ok(if (t - a).abs() <= eps || (t - b).abs() <= eps {
        0.5 * inner
    } else if t > a && t < b {
        inner
    } else {
        0.0
    })
}

/// Node value for the piecewise-linear representation used by the
/// propagator: the ramp on the closed support, taking the inner limits at the
/// two jumps, and zero outside.
pub fn p0_nodal(ph: &BallPhantom, det: &DetectorGeometry, t: f64) -> Result<f64> {
    let (a, b) = p0_support(ph, det)?;
    let eps = 1e-12 * b.max(1.0);
    Ok(if t >= a - eps && t <= b + eps {
        ph.amplitude * det.c0 * det.c0 * (det.r0 - det.c0 * t) / (2.0 * det.r0)
    } else {
        0.0
    })
}

/// The N-wave on the unsigned time samples of `grid`. The support must fit in
/// the periodic window.
pub fn p0_ball(ph: &BallPhantom, det: &DetectorGeometry, grid: &GridPair) -> Result<SampledSignal> {
    let (_, b) = p0_support(ph, det)?;
    if b >= grid.window() {
        return Err(Error::domain(format!(
            "trace support ends at {b} but the time window is {}",
            grid.window()
        )));
    }
    let v = (0..grid.n)
        .map(|j| p0_value(ph, det, grid.time(j)))
        .collect::<Result<Vec<_>>>()?;
    SampledSignal::new(*grid, v)
}

const BANDS: usize = 2000;
const AZIMUTHS: usize = 8;

/// Independent evaluation of the trace by quadrature of the spherical mean.
///
/// The sphere of radius `c0 t` about the detector is cut into latitude bands
/// around the detector-centre axis, each band into azimuthal cells. On every
/// cell the signed distance to the ball surface is linear in the latitude
/// cosine, so the inside fraction is taken from the values at the band edges.
/// The time derivative is a central difference with step `1e-4 / c0`.
pub fn p0_oracle(ph: &BallPhantom, det: &DetectorGeometry, t: f64) -> Result<f64> {
    check_outside(ph, det)?;
    let h = 1e-4 / det.c0;
    let g = |s: f64| {
        let rho = det.c0 * s;
        det.c0 * det.c0 * s * ph.amplitude * sphere_mean(ph, det.r0, rho)
    };
    Ok((g(t + h) - g(t - h)) / (2.0 * h))
}

fn sphere_mean(ph: &BallPhantom, r0: f64, rho: f64) -> f64 {
    if rho <= 0.0 {
        return if r0 < ph.radius { 1.0 } else { 0.0 };
    }
    // detector at the origin, ball centre at (0, 0, r0)
    let inside = |u: f64, phi: f64| {
        let s = (1.0 - u * u).max(0.0).sqrt();
        let (x, y, z) = (rho * s * phi.cos(), rho * s * phi.sin(), rho * u);
        ph.radius * ph.radius - (x * x + y * y + (z - r0) * (z - r0))
    };
    let mut acc = 0.0;
    let du = 2.0 / BANDS as f64;
    let dphi = 2.0 * std::f64::consts::PI / AZIMUTHS as f64;
    for b in 0..BANDS {
        let ua = -1.0 + b as f64 * du;
        let ub = ua + du;
        for a in 0..AZIMUTHS {
            let phi = (a as f64 + 0.5) * dphi;
            let (da, db) = (inside(ua, phi), inside(ub, phi));
            let frac = if da >= 0.0 && db >= 0.0 {
                1.0
            } else if da < 0.0 && db < 0.0 {
                0.0
            } else {
                da.max(db) / (da - db).abs()
            };
            acc += frac * du * dphi;
        }
    }
    acc / (4.0 * std::f64::consts::PI)
}
