//! Finite-difference residuals of the continuous equations, used to check
//! closed-form solutions and their forcing terms.

use super::exact::{ExactFields, ExactSolution};
use crate::closure::production_gk;
use crate::fields::TurbulenceCoeffs;
use crate::geometry::{Grad3, Point};

const H: f64 = 1e-3;

/// Fourth-order central difference of `f` along `axis` (3 = time).
pub fn fd_derivative(f: &dyn Fn(&Point, f64) -> f64, p: &Point, t: f64, axis: usize) -> f64 {
    let shift = |s: f64| {
        let mut q = *p;
        let mut tt = t;
        if axis == 3 {
            tt += s;
        } else {
            q[axis] += s;
        }
        f(&q, tt)
    };
    (-shift(2.0 * H) + 8.0 * shift(H) - 8.0 * shift(-H) + shift(-2.0 * H)) / (12.0 * H)
}

/// Residuals `[momentum x, y, z, k, eps, species]` of the equations with the
/// forcing of `ex` subtracted, at unit density. The species residual needs
/// `diffusivity`; k and eps need `turb`. Absent equations give zero.
pub fn pde_residuals(
    ex: &dyn ExactSolution,
    p: &Point,
    t: f64,
    mu: f64,
    diffusivity: Option<f64>,
    turb: Option<TurbulenceCoeffs>,
) -> [f64; 6] {
    let d = fd_derivative;
    let mu_t = |q: &Point, s: f64| match turb {
        Some(c) => {
            let f = ex.fields(q, s);
            c.c_mu * f.k * f.k / f.eps
        }
        None => 0.0,
    };
    let src = ex.sources(p, t);
    let fl = ex.fields(p, t);
    let mut out = [0.0; 6];
    for a in 0..3 {
        let ua = |q: &Point, s: f64| ex.fields(q, s).u[a];
        let mut r = d(&ua, p, t, 3);
        for b in 0..3 {
            let flux = |q: &Point, s: f64| {
                let f = ex.fields(q, s);
                f.u[b] * f.u[a]
            };
            r += d(&flux, p, t, b);
            let visc = |q: &Point, s: f64| (mu + mu_t(q, s)) * d(&ua, q, s, b);
            r -= d(&visc, p, t, b);
        }
        r += d(&|q: &Point, s: f64| ex.fields(q, s).pi, p, t, a);
        if turb.is_some() {
            r += 2.0 / 3.0 * d(&|q: &Point, s: f64| ex.fields(q, s).k, p, t, a);
        }
        out[a] = r - src.f_u[a];
    }
    let scalar = |get: fn(&ExactFields) -> f64, coef: &dyn Fn(&Point, f64) -> f64| {
        let mut r = d(&|q: &Point, s: f64| get(&ex.fields(q, s)), p, t, 3);
        for b in 0..3 {
            r += d(
                &|q: &Point, s: f64| {
                    let f = ex.fields(q, s);
                    f.u[b] * get(&f)
                },
                p,
                t,
                b,
            );
            let diff = |q: &Point, s: f64| coef(q, s) * d(&|q2: &Point, s2: f64| get(&ex.fields(q2, s2)), q, s, b);
            r -= d(&diff, p, t, b);
        }
        r
    };
    if let Some(c) = turb {
        let mut grad_u = Grad3::zeros();
        for a in 0..3 {
            for b in 0..3 {
                grad_u[(a, b)] = d(&|q: &Point, s: f64| ex.fields(q, s).u[a], p, t, b);
            }
        }
        let g_k = production_gk(&grad_u, mu_t(p, t));
        out[3] = scalar(|f| f.k, &|q, s| mu + mu_t(q, s) / c.sigma_k) + fl.eps - g_k - src.f_k;
        out[4] = scalar(|f| f.eps, &|q, s| mu + mu_t(q, s) / c.sigma_eps) + c.c2_eps * fl.eps * fl.eps / fl.k
            - c.c1_eps * fl.eps / fl.k * g_k
            - src.f_eps;
    }
    if let Some(dif) = diffusivity {
        let sc_t = turb.map_or(1.0, |c| c.sc_t);
        out[5] = scalar(|f| f.y, &|q, s| dif + mu_t(q, s) / sc_t) - src.f_y;
    }
    out
}
