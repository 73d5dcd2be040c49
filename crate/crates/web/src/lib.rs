//! WebAssembly bindings for the one-dimensional LADER demo page.

use fvfe::lader1d::{amplification_factor, max_over_theta, Adre1d, StabilityOrthotope};
use wasm_bindgen::prelude::*;

fn js_err(e: fvfe::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `max |A|` on a `res x res` grid of `(c, d)` at fixed `r`, row-major with
/// `c` varying fastest.
#[wasm_bindgen]
pub fn stability_slice(c_max: f64, d_max: f64, r: f64, res: usize, n_theta: usize) -> Result<Vec<f64>, JsError> {
    StabilityOrthotope::new(c_max, d_max, r.min(0.0)).map_err(js_err)?;
    if res < 2 || n_theta < 3 {
        return Err(JsError::new("resolution too small"));
    }
    let step = |hi: f64, k: usize| hi * k as f64 / (res - 1) as f64;
    let mut out = Vec::with_capacity(res * res);
    for id in 0..res {
        for ic in 0..res {
            out.push(max_over_theta(step(c_max, ic), step(d_max, id), r, n_theta).0);
        }
    }
    Ok(out)
}

/// Interleaved `(theta, |A|, arg A)` for `n` angles in `[-pi, pi]`.
#[wasm_bindgen]
pub fn amplification_curve(c: f64, d: f64, r: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(3 * n);
    for k in 0..n {
        let th = -pi + 2.0 * pi * k as f64 / (n - 1) as f64;
        let a = amplification_factor(th, c, d, r);
        out.extend_from_slice(&[th, a.norm(), a.arg()]);
    }
    out
}

/// Periodic advection-diffusion-reaction problem on the unit interval.
#[wasm_bindgen]
pub struct Evolution {
    inner: Adre1d,
    alpha: f64,
    dt: f64,
}

#[wasm_bindgen]
impl Evolution {
    /// `profile`: 0 sine, 1 Gaussian pulse, 2 square wave. `dt` follows from
    /// the Courant number `c` and is capped so that `d <= d_cap`.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, lambda: f64, alpha: f64, beta: f64, c: f64, d_cap: f64, profile: u32) -> Result<Evolution, JsError> {
        if n < 3 {
            return Err(JsError::new("need at least three cells"));
        }
        let dx = 1.0 / n as f64;
        let q = (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) * dx;
                match profile {
                    0 => (2.0 * std::f64::consts::PI * x).sin(),
                    1 => (-((x - 0.3) / 0.05).powi(2)).exp(),
                    _ => {
                        if (0.2..0.4).contains(&x) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                }
            })
            .collect();
        let mut dt = if lambda != 0.0 { c * dx / lambda.abs() } else { c * dx };
        if alpha > 0.0 {
            dt = dt.min(d_cap * dx * dx / alpha);
        }
        if beta < 0.0 {
            dt = dt.min(1.0 / -beta);
        }
        let inner = Adre1d::new(q, 0.0, dx, lambda, beta).map_err(js_err)?;
        Ok(Evolution { inner, alpha, dt })
    }

    pub fn advance(&mut self, steps: usize) -> Result<(), JsError> {
        for _ in 0..steps {
            self.inner.step(self.dt, &self.alpha).map_err(js_err)?;
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        self.inner.q.clone()
    }

    pub fn time(&self) -> f64 {
        self.inner.time
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}
