//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The numerical work lives in [`demo`] as plain Rust so it can be tested
//! natively; the `#[wasm_bindgen]` items only marshal arguments and results.

use wasm_bindgen::prelude::*;

pub mod demo;

/// Two parallel series plus a short text summary.
#[wasm_bindgen]
pub struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
    y2: Vec<f64>,
    summary: String,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    /// Second series; empty when the curve has only one.
    #[wasm_bindgen(getter)]
    pub fn y2(&self) -> Vec<f64> {
        self.y2.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

fn js_err(e: demo::DemoError) -> JsError {
    JsError::new(&e.to_string())
}

/// Attenuation kernel `K(t, r)` for a law given as JSON, e.g.
/// `{"law":"power_law","gamma":1.5,"alpha0":0.0316}`.
#[wasm_bindgen]
pub fn kernel_curve(law_json: &str, r: f64, n: usize, omega_max: f64) -> Result<Curve, JsError> {
    let k = demo::kernel_curve(law_json, r, n, omega_max).map_err(js_err)?;
    Ok(Curve {
        summary: format!(
            "{}: pre-arrival energy {:.3e}, {}",
            k.law,
            k.pre_arrival_fraction,
            if k.causal { "causal" } else { "non-causal" }
        ),
        x: k.t,
        y: k.k,
        y2: Vec::new(),
    })
}

/// KSB attenuation against the power law `|tau0 omega|^gamma` on `[0, omega_max]`.
#[wasm_bindgen]
pub fn law_comparison(
    gamma: f64,
    tau0: f64,
    c0: f64,
    omega_max: f64,
    points: usize,
) -> Result<Curve, JsError> {
    let c = demo::law_comparison(gamma, tau0, c0, omega_max, points).map_err(js_err)?;
    Ok(Curve {
        summary: format!(
            "alpha0 = {:.4e}, largest relative difference {:.3e}",
            c.alpha0, c.max_rel_diff
        ),
        x: c.omega,
        y: c.ksb,
        y2: c.power_law,
    })
}

/// Singular values of the propagator matrix for a ball of radius 1 and a
/// detector `distance` cm from its surface.
#[wasm_bindgen]
pub fn singular_values(
    law_json: &str,
    c0: f64,
    distance: f64,
    n: usize,
    omega_max: f64,
) -> Result<Curve, JsError> {
    let s = demo::singular_values(law_json, c0, distance, n, omega_max).map_err(js_err)?;
    Ok(Curve {
        summary: format!(
            "{} columns, n_cut = {}, sigma_max = {:.3e}",
            s.sigma.len(),
            s.n_cut,
            s.sigma[0]
        ),
        x: (0..s.sigma.len()).map(|i| i as f64).collect(),
        y: s.sigma,
        y2: Vec::new(),
    })
}
