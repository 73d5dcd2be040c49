//! One-dimensional LADER scheme for `q_t + lambda q_x = (alpha q_x)_x + beta q`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Diffusion coefficient as a function of `(x, t)`, with its time derivative.
pub trait Diffusivity {
    fn alpha(&self, x: f64, t: f64) -> f64;
    fn alpha_t(&self, x: f64, t: f64) -> f64;
    /// True when `alpha` is the same everywhere and constant in time.
    fn is_constant(&self) -> bool {
        false
    }
}

impl Diffusivity for f64 {
    fn alpha(&self, _x: f64, _t: f64) -> f64 {
        *self
    }
    fn alpha_t(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn is_constant(&self) -> bool {
        true
    }
}

/// Closure-backed diffusivity: `(alpha, d alpha / dt)`.
pub struct FnDiffusivity<F, G>(pub F, pub G);

impl<F: Fn(f64, f64) -> f64, G: Fn(f64, f64) -> f64> Diffusivity for FnDiffusivity<F, G> {
    fn alpha(&self, x: f64, t: f64) -> f64 {
        (self.0)(x, t)
    }
    fn alpha_t(&self, x: f64, t: f64) -> f64 {
        (self.1)(x, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary1d {
    Periodic,
    /// Two ghost values on each side: `[q_{-2}, q_{-1}]` and `[q_N, q_{N+1}]`.
    Ghost { left: [f64; 2], right: [f64; 2] },
}

/// Uniform grid on `[x0, x0 + n dx]` with cell centres `x0 + (i + 1/2) dx`.
#[derive(Debug, Clone)]
pub struct Adre1d {
    pub q: Vec<f64>,
    pub x0: f64,
    pub dx: f64,
    pub lambda: f64,
    pub beta: f64,
    pub time: f64,
    pub boundary: Boundary1d,
}

impl Adre1d {
    pub fn new(q: Vec<f64>, x0: f64, dx: f64, lambda: f64, beta: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::InvalidArgument("dx must be positive".into()));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("initial data must be finite".into()));
        }
        Ok(Adre1d {
            q,
            x0,
            dx,
            lambda,
            beta,
            time: 0.0,
            boundary: Boundary1d::Periodic,
        })
    }

    pub fn centre(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    /// Values with a halo of two cells on each side.
    fn padded(&self) -> Result<Vec<f64>> {
        let n = self.q.len();
        if n < 3 {
            return Err(Error::Boundary("need at least three cells for the five-point stencil".into()));
        }
        let mut p = Vec::with_capacity(n + 4);
        match self.boundary {
            Boundary1d::Periodic => {
                p.extend_from_slice(&[self.q[n - 2], self.q[n - 1]]);
                p.extend_from_slice(&self.q);
                p.extend_from_slice(&[self.q[0], self.q[1]]);
            }
            Boundary1d::Ghost { left, right } => {
                p.extend_from_slice(&left);
                p.extend_from_slice(&self.q);
                p.extend_from_slice(&right);
            }
        }
        Ok(p)
    }

    /// Advances by `dt` with the variable-coefficient update; a uniform,
    /// steady `alpha` takes the constant-coefficient form.
    pub fn step(&mut self, dt: f64, alpha: &dyn Diffusivity) -> Result<()> {
        let q = self.padded()?;
        let next = if alpha.is_constant() {
            let a = alpha.alpha(0.0, self.time);
            constant_alpha_update(&q, self.lambda * dt / self.dx, a * dt / (self.dx * self.dx), self.beta * dt)
        } else {
            let n = self.q.len() as isize;
            let a_cell: Vec<f64> = (-2..n + 2).map(|i| alpha.alpha(self.centre(i), self.time)).collect();
            let a_t_cell: Vec<f64> = (-2..n + 2).map(|i| alpha.alpha_t(self.centre(i), self.time)).collect();
            variable_alpha_update(&q, &a_cell, &a_t_cell, self.lambda, self.beta, dt, self.dx)
        };
        self.q = next;
        self.time += dt;
        Ok(())
    }

    /// Forces the variable-coefficient path with a constant `alpha`.
    pub fn step_variable(&mut self, dt: f64, alpha: f64) -> Result<()> {
        let q = self.padded()?;
        let m = q.len();
        self.q = variable_alpha_update(&q, &vec![alpha; m], &vec![0.0; m], self.lambda, self.beta, dt, self.dx);
        self.time += dt;
        Ok(())
    }
}

fn mirrored(q: &[f64], f: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let r: Vec<f64> = q.iter().rev().copied().collect();
    let mut out = f(&r);
    out.reverse();
    out
}

/// Update of the interior cells of a padded array (two halo cells per side)
/// with constant coefficients `c, d, r`.
pub fn constant_alpha_update(q: &[f64], c: f64, d: f64, r: f64) -> Vec<f64> {
    if c < 0.0 {
        return mirrored(q, |m| constant_alpha_update(m, -c, d, r));
    }
    let n = q.len() - 4;
    let dh = |i: usize| q[i] - q[i - 1]; // q_i - q_{i-1}
    let d2 = |i: usize| q[i + 1] - 2.0 * q[i] + q[i - 1];
    (2..n + 2)
        .map(|i| {
            // second differences one cell further out use the halo
            let d2m = d2(i - 1);
            let d2p = d2(i + 1);
            let d2i = d2(i);
            let adv = dh(i) + 0.5 * d2m - 0.5 * c * d2i + 0.5 * d * (d2p - d2m) + 0.5 * r * dh(i);
            let dif = d2i + 0.5 * d * (d2p - 2.0 * d2i + d2m) + 0.5 * r * d2i;
            let rea = q[i] - 0.25 * c * (q[i + 1] - q[i - 1]) + 0.5 * d * d2i + 0.5 * r * q[i];
            q[i] - c * adv + d * dif + r * rea
        })
        .collect()
}

/// Variable-coefficient update. `a` and `a_t` are cell values of `alpha` and
/// its time derivative on the padded grid; half-index values are the means
/// of adjacent cells.
pub fn variable_alpha_update(q: &[f64], a: &[f64], a_t: &[f64], lambda: f64, beta: f64, dt: f64, dx: f64) -> Vec<f64> {
    if lambda < 0.0 {
        let ar: Vec<f64> = a.iter().rev().copied().collect();
        let atr: Vec<f64> = a_t.iter().rev().copied().collect();
        return mirrored(q, |m| variable_alpha_update(m, &ar, &atr, -lambda, beta, dt, dx));
    }
    let n = q.len() - 4;
    let c = lambda * dt / dx;
    let r = beta * dt;
    let s = dt / (dx * dx);
    // upwind differences: du(i) = q_i - q_{i-1} sits at i - 1/2
    let du = |i: usize| q[i] - q[i - 1];
    // half-index coefficient at i - 1/2
    let ah = |i: usize| 0.5 * (a[i] + a[i - 1]);
    let ah_t = |i: usize| 0.5 * (a_t[i] + a_t[i - 1]);
    // alpha-weighted difference at i - 1/2
    let ad = |i: usize| ah(i) * du(i);
    (2..n + 2)
        .map(|i| {
            let adv = du(i) + 0.5 * (du(i) - du(i - 1)) - 0.5 * c * (du(i + 1) - du(i))
                + 0.5 * s * (a[i + 1] * du(i + 2) - a[i] * (du(i) + du(i + 1)) + a[i - 1] * du(i - 1))
                + 0.5 * r * du(i);
            let abar_r = ah(i + 1) + 0.5 * dt * ah_t(i + 1);
            let abar_l = ah(i) + 0.5 * dt * ah_t(i);
            let right = du(i + 1) + 0.5 * s * (ad(i + 2) - 2.0 * ad(i + 1) + ad(i)) + 0.5 * r * du(i + 1);
            let left = -du(i) + 0.5 * s * (-ad(i + 1) + 2.0 * ad(i) - ad(i - 1)) - 0.5 * r * du(i);
            let dif = s * (abar_r * right + abar_l * left);
            let rea = q[i] - 0.25 * c * (q[i + 1] - q[i - 1]) + 0.5 * s * (ad(i + 1) - ad(i)) + 0.5 * r * q[i];
            q[i] - c * adv + dif + r * rea
        })
        .collect()
}

/// Growth factor of the Fourier mode `e^{i j theta}` under the
/// constant-coefficient scheme.
pub fn amplification_factor(theta: f64, c: f64, d: f64, r: f64) -> Complex64 {
    if c < 0.0 {
        return amplification_factor(-theta, -c, d, r);
    }
    let e = Complex64::from_polar(1.0, theta);
    let ei = e.inv();
    let one = Complex64::new(1.0, 0.0);
    let dd = e - 2.0 + ei;
    let back = one - ei;
    let adv = back * (1.0 + 0.5 * r) + 0.5 * dd * ei - 0.5 * c * dd + 0.5 * d * dd * (e - ei);
    let dif = dd + 0.5 * d * dd * dd + 0.5 * r * dd;
    let rea = one * (1.0 + 0.5 * r) - 0.25 * c * (e - ei) + 0.5 * d * dd;
    one - c * adv + d * dif + r * rea
}

/// Box `[0, c_max] x [0, d_max] x [r_min, 0]` of scheme parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityOrthotope {
    pub c_max: f64,
    pub d_max: f64,
    pub r_min: f64,
}

impl StabilityOrthotope {
    pub fn new(c_max: f64, d_max: f64, r_min: f64) -> Result<Self> {
        if !(c_max >= 0.0 && d_max >= 0.0 && r_min <= 0.0) {
            return Err(Error::InvalidArgument("need c_max, d_max >= 0 >= r_min".into()));
        }
        Ok(StabilityOrthotope { c_max, d_max, r_min })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub max_abs: f64,
    /// `(theta, c, d, r)` where the maximum was found.
    pub at: [f64; 4],
}

impl ScanResult {
    pub fn is_stable(&self) -> bool {
        self.max_abs <= 1.0 + 1e-12
    }
}

fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// Maximum of `|A|` over `theta` in `[-pi, pi]` at one parameter point.
pub fn max_over_theta(c: f64, d: f64, r: f64, n_theta: usize) -> (f64, f64) {
    let pi = std::f64::consts::PI;
    (0..n_theta)
        .map(|k| {
            let th = axis(-pi, pi, n_theta, k);
            (amplification_factor(th, c, d, r).norm(), th)
        })
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

/// Samples `res` points per parameter axis and `n_theta` angles.
pub fn stability_scan(o: &StabilityOrthotope, res: usize, n_theta: usize) -> Result<ScanResult> {
    if res < 3 || n_theta < 3 {
        return Err(Error::InvalidArgument("resolution must be at least 3".into()));
    }
    let mut best = ScanResult {
        max_abs: f64::NEG_INFINITY,
        at: [0.0; 4],
    };
    for ic in 0..res {
        let c = axis(0.0, o.c_max, res, ic);
        for id in 0..res {
            let d = axis(0.0, o.d_max, res, id);
            for ir in 0..res {
                let r = axis(o.r_min, 0.0, res, ir);
                let (m, th) = max_over_theta(c, d, r, n_theta);
                if m > best.max_abs {
                    best = ScanResult {
                        max_abs: m,
                        at: [th, c, d, r],
                    };
                }
            }
        }
    }
    Ok(best)
}

/// Rows `(c, d, r, max |A|)` over a regular grid, for plotting.
pub fn stability_map(o: &StabilityOrthotope, res: usize, n_theta: usize) -> Result<Vec<[f64; 4]>> {
    if res < 2 || n_theta < 3 {
        return Err(Error::InvalidArgument("resolution must be at least 2".into()));
    }
    let mut rows = Vec::with_capacity(res * res * res);
    for ic in 0..res {
        let c = axis(0.0, o.c_max, res, ic);
        for id in 0..res {
            let d = axis(0.0, o.d_max, res, id);
            for ir in 0..res {
                let r = axis(o.r_min, 0.0, res, ir);
                rows.push([c, d, r, max_over_theta(c, d, r, n_theta).0]);
            }
        }
    }
    Ok(rows)
}

/// Constant-coefficient problem with the exact solution
/// `q = exp((beta - alpha k^2) t) sin(k (x - lambda t))` on a periodic unit interval.
#[derive(Debug, Clone, Copy)]
pub struct FourierMode {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: f64,
}

impl FourierMode {
    pub fn exact(&self, x: f64, t: f64) -> f64 {
        ((self.beta - self.alpha * self.k * self.k) * t).exp() * (self.k * (x - self.lambda * t)).sin()
    }
}

#[derive(Debug, Clone)]
pub struct Convergence1d {
    pub cells: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Runs the mode to `t_end` on each grid with `dt = dt_of(dx)` and reports
/// discrete L2 errors of the cell values at the final time.
pub fn convergence_study_1d(
    mode: &FourierMode,
    cells: &[usize],
    t_end: f64,
    dt_of: impl Fn(f64) -> f64,
) -> Result<Convergence1d> {
    let mut errors = Vec::new();
    for &n in cells {
        let dx = 1.0 / n as f64;
        let q0 = (0..n).map(|i| mode.exact((i as f64 + 0.5) * dx, 0.0)).collect();
        let mut s = Adre1d::new(q0, 0.0, dx, mode.lambda, mode.beta)?;
        let steps = (t_end / dt_of(dx)).ceil().max(1.0) as usize;
        let dt = t_end / steps as f64;
        for step in 0..steps {
            s.step(dt, &mode.alpha)?;
            if let Some(node) = s.q.iter().position(|v| !v.is_finite()) {
                return Err(Error::Divergence { node, step: step as u64 });
            }
        }
        let e2: f64 = s
            .q
            .iter()
            .enumerate()
            .map(|(i, v)| (v - mode.exact((i as f64 + 0.5) * dx, t_end)).powi(2) * dx)
            .sum();
        errors.push(e2.sqrt());
    }
    let orders = (1..cells.len())
        .map(|m| (errors[m - 1] / errors[m]).ln() / (cells[m] as f64 / cells[m - 1] as f64).ln())
        .collect();
    Ok(Convergence1d {
        cells: cells.to_vec(),
        errors,
        orders,
    })
}
