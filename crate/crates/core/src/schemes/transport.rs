//! Explicit transport-diffusion stage producing the intermediate states.

use super::flux::{alpha_from_normal_speeds, kolgan_flux, kolgan_slopes, rusanov_flux, EquationClass};
use super::lader::{extrapolate, lader_evolve_flux_states};
use super::pressure::pressure_face_term;
use super::viscous::{face_coefficient, viscous_flux_galerkin, viscous_flux_orthogonal};
use crate::error::{Error, Result};
use crate::fields::{FlowState, Scheme, SchemeConfig};
use crate::geometry::Vec3;
use crate::mesh::{DualMesh, FeMesh, NONE};

/// Position of every transported unknown in the packed per-node array:
/// three momentum components, then k and epsilon when turbulence is on, then
/// the species.
#[derive(Debug, Clone, Copy)]
pub struct Layout {
    pub nv: usize,
    pub k: Option<usize>,
    pub eps: Option<usize>,
    pub y0: usize,
    pub ny: usize,
}

impl Layout {
    pub fn new(cfg: &SchemeConfig) -> Self {
        let (k, eps, y0) = if cfg.turbulence {
            (Some(3), Some(4), 5)
        } else {
            (None, None, 3)
        };
        Layout {
            nv: y0 + cfg.n_species,
            k,
            eps,
            y0,
            ny: cfg.n_species,
        }
    }

    /// Number of scalar (non-momentum) unknowns.
    pub fn n_scalars(&self) -> usize {
        self.nv - 3
    }

    fn class(v: usize) -> EquationClass {
        if v < 3 {
            EquationClass::Momentum
        } else {
            EquationClass::Scalar
        }
    }

    pub fn pack(&self, s: &FlowState) -> Vec<f64> {
        let nn = s.n_nodes();
        let mut w = vec![0.0; nn * self.nv];
        for i in 0..nn {
            let r = &mut w[i * self.nv..(i + 1) * self.nv];
            r[0] = s.w_u[i].x;
            r[1] = s.w_u[i].y;
            r[2] = s.w_u[i].z;
            if let (Some(k), Some(e)) = (self.k, self.eps) {
                r[k] = s.w_k[i];
                r[e] = s.w_eps[i];
            }
            for (m, y) in s.w_y.iter().enumerate().take(self.ny) {
                r[self.y0 + m] = y[i];
            }
        }
        w
    }
}

/// Forcing evaluated at the nodes for the current step.
#[derive(Debug, Clone, Default)]
pub struct NodeSources {
    /// Momentum forcing applied in the transport update; empty when absent.
    pub f_u: Vec<Vec3>,
    /// Rate of change of each scalar unknown (k, epsilon, species order) from
    /// reactions and forcing. Only used to evolve LADER interface states;
    /// empty when absent.
    pub scalar_rates: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intermediate {
    pub w_u: Vec<Vec3>,
    pub w_k: Vec<f64>,
    pub w_eps: Vec<f64>,
    pub w_y: Vec<Vec<f64>>,
}

/// Per-node diffusion coefficient of every packed unknown.
fn diffusion_coefficients(state: &FlowState, cfg: &SchemeConfig, lay: &Layout) -> Vec<f64> {
    let nn = state.n_nodes();
    let nv = lay.nv;
    let c = &cfg.coeffs;
    let mut a = vec![0.0; nn * nv];
    for i in 0..nn {
        let mt = if cfg.turbulence { state.mu_t[i] } else { 0.0 };
        let r = &mut a[i * nv..(i + 1) * nv];
        r[0] = cfg.mu + mt;
        r[1] = cfg.mu + mt;
        r[2] = cfg.mu + mt;
        if let (Some(k), Some(e)) = (lay.k, lay.eps) {
            r[k] = cfg.mu + mt / c.sigma_k;
            r[e] = cfg.mu + mt / c.sigma_eps;
        }
        for m in 0..lay.ny {
            r[lay.y0 + m] = cfg.rho * cfg.diffusivity + mt / c.sc_t;
        }
    }
    a
}

/// Galerkin gradient of every packed unknown on every element.
pub fn tet_gradients(dual: &DualMesh, w: &[f64], nv: usize) -> Vec<Vec3> {
    let nt = dual.n_tets();
    let mut g = vec![Vec3::zeros(); nt * nv];
    for t in 0..nt {
        let f = dual.tet_faces[t];
        let b = &dual.tet_basis_grad[t];
        let gk = [-3.0 * b[0], -3.0 * b[1], -3.0 * b[2], -3.0 * b[3]];
        for v in 0..nv {
            g[t * nv + v] = gk[0] * w[f[0] * nv + v]
                + gk[1] * w[f[1] * nv + v]
                + gk[2] * w[f[2] * nv + v]
                + gk[3] * w[f[3] * nv + v];
        }
    }
    g
}

fn velocity_of(w: &[f64], nv: usize, i: usize, inv_rho: f64) -> Vec3 {
    Vec3::new(w[i * nv], w[i * nv + 1], w[i * nv + 2]) * inv_rho
}

/// Advances every transported unknown by one explicit step.
///
/// `W~_i = W_i - dt/|C_i| [sum_j phi_ij + pressure - sum_j viscous_ij] + dt f_u`.
pub fn transport_diffusion_step(
    state: &FlowState,
    dual: &DualMesh,
    fe: &FeMesh,
    cfg: &SchemeConfig,
    dt: f64,
    sources: &NodeSources,
) -> Result<Intermediate> {
    state.check_sizes(dual)?;
    let lay = Layout::new(cfg);
    if state.w_y.len() < lay.ny {
        return Err(Error::Size {
            what: "species",
            expected: lay.ny,
            actual: state.w_y.len(),
        });
    }
    let nv = lay.nv;
    let nn = dual.n_nodes();
    let inv_rho = 1.0 / cfg.rho;
    let w = lay.pack(state);
    let coef = diffusion_coefficients(state, cfg, &lay);
    let gw = tet_gradients(dual, &w, nv);
    let mut res = vec![0.0; nn * nv];

    match cfg.scheme {
        Scheme::Order1 => advect_order1(dual, cfg, &w, nv, inv_rho, &mut res),
        Scheme::CvcG | Scheme::CvcOrth => advect_kolgan(dual, cfg, &w, &gw, nv, inv_rho, &mut res),
        Scheme::Lader => {}
    }

    match cfg.scheme {
        Scheme::CvcOrth => diffuse_orthogonal(dual, &w, &coef, &lay, inv_rho, &mut res),
        Scheme::Order1 | Scheme::CvcG => {
            let gx: Vec<Vec3> = gw.iter().map(|g| g * inv_rho).collect();
            diffuse_galerkin(dual, &gx, &w, &coef, &lay, &mut res);
        }
        Scheme::Lader => {
            let ev = lader_evolution(state, dual, fe, cfg, &lay, &w, &gw, &coef, dt, sources)?;
            advect_lader(dual, cfg, &w, &gw, &ev.dw_dt, nv, inv_rho, dt, &mut res);
            let gx = tet_gradients(dual, &ev.x_bar, nv);
            let w_bar: Vec<f64> = ev.x_bar.iter().map(|x| x * cfg.rho).collect();
            diffuse_galerkin(dual, &gx, &w_bar, &coef, &lay, &mut res);
        }
    }

    pressure_and_boundary(dual, &state.pi, &w, nv, inv_rho, &mut res);
    if let Some(k) = lay.k {
        turbulent_pressure_boundary(dual, &w, nv, k, &mut res);
    }

    let mut out = Intermediate {
        w_u: vec![Vec3::zeros(); nn],
        w_k: state.w_k.clone(),
        w_eps: state.w_eps.clone(),
        w_y: state.w_y.clone(),
    };
    let has_fu = !sources.f_u.is_empty();
    if has_fu && sources.f_u.len() != nn {
        return Err(Error::Size {
            what: "momentum source",
            expected: nn,
            actual: sources.f_u.len(),
        });
    }
    for i in 0..nn {
        let s = dt / dual.cell_volume[i];
        let mut r = [0.0; 3];
        for a in 0..3 {
            r[a] = w[i * nv + a] - s * res[i * nv + a];
        }
        let mut wu = Vec3::new(r[0], r[1], r[2]);
        if has_fu {
            wu += dt * sources.f_u[i];
        }
        out.w_u[i] = wu;
        if let (Some(k), Some(e)) = (lay.k, lay.eps) {
            out.w_k[i] = w[i * nv + k] - s * res[i * nv + k];
            out.w_eps[i] = w[i * nv + e] - s * res[i * nv + e];
        }
        for m in 0..lay.ny {
            let v = lay.y0 + m;
            out.w_y[m][i] = w[i * nv + v] - s * res[i * nv + v];
        }
    }
    for i in 0..nn {
        let finite = out.w_u[i].iter().all(|x| x.is_finite())
            && out.w_k[i].is_finite()
            && out.w_eps[i].is_finite()
            && out.w_y.iter().all(|y| y[i].is_finite());
        if !finite {
            return Err(Error::Divergence {
                node: i,
                step: state.step,
            });
        }
    }
    Ok(out)
}

fn advect_order1(dual: &DualMesh, cfg: &SchemeConfig, w: &[f64], nv: usize, inv_rho: f64, res: &mut [f64]) {
    for f in &dual.interfaces {
        let (i, j) = (f.i, f.j);
        let un_i = velocity_of(w, nv, i, inv_rho).dot(&f.eta);
        let un_j = velocity_of(w, nv, j, inv_rho).dot(&f.eta);
        for v in 0..nv {
            let alpha = alpha_from_normal_speeds(un_i, un_j, cfg.alpha_mode, Layout::class(v));
            let phi = rusanov_flux(w[i * nv + v], w[j * nv + v], un_i, un_j, alpha);
            res[i * nv + v] += phi;
            res[j * nv + v] -= phi;
        }
    }
}

fn advect_kolgan(
    dual: &DualMesh,
    cfg: &SchemeConfig,
    w: &[f64],
    gw: &[Vec3],
    nv: usize,
    inv_rho: f64,
    res: &mut [f64],
) {
    let mut wl = vec![0.0; nv];
    let mut wr = vec![0.0; nv];
    for f in &dual.interfaces {
        let (i, j) = (f.i, f.j);
        let d = dual.nodes[j] - dual.nodes[i];
        for v in 0..nv {
            let (wi, wj) = (w[i * nv + v], w[j * nv + v]);
            let (sl, sr) = kolgan_slopes(&gw[f.tet_l * nv + v], &gw[f.tet_r * nv + v], &d, wi, wj);
            wl[v] = wi + sl;
            wr[v] = wj - sr;
        }
        let un_i = velocity_of(w, nv, i, inv_rho).dot(&f.eta);
        let un_j = velocity_of(w, nv, j, inv_rho).dot(&f.eta);
        let unl = Vec3::new(wl[0], wl[1], wl[2]).dot(&f.eta) * inv_rho;
        let unr = Vec3::new(wr[0], wr[1], wr[2]).dot(&f.eta) * inv_rho;
        for v in 0..nv {
            let alpha = alpha_from_normal_speeds(unl, unr, cfg.alpha_mode, Layout::class(v));
            let phi = kolgan_flux(w[i * nv + v], w[j * nv + v], wl[v], wr[v], un_i, un_j, alpha);
            res[i * nv + v] += phi;
            res[j * nv + v] -= phi;
        }
    }
}

struct LaderEvolution {
    /// Estimate of dW/dt on every element.
    dw_dt: Vec<f64>,
    /// Nodal primitive values evolved by diffusion only.
    x_bar: Vec<f64>,
}

/// Local time derivatives for the interface states and the diffusion-only
/// evolved nodal values.
///
/// On each element `dW/dt ~ -div(U W) + 2 div(a grad X) + S`, where the
/// divergence of the diffusive flux uses nodal gradients averaged over the
/// adjacent elements. The diffusion contribution is doubled because the
/// evolved diffusion flux leaves out advection; together the two supply the
/// full cross term of the half-step expansion, as in the one-dimensional
/// scheme.
#[allow(clippy::too_many_arguments)]
fn lader_evolution(
    state: &FlowState,
    dual: &DualMesh,
    fe: &FeMesh,
    cfg: &SchemeConfig,
    lay: &Layout,
    w: &[f64],
    gw: &[Vec3],
    coef: &[f64],
    dt: f64,
    sources: &NodeSources,
) -> Result<LaderEvolution> {
    let nv = lay.nv;
    let nn = dual.n_nodes();
    let nt = dual.n_tets();
    let inv_rho = 1.0 / cfg.rho;

    // nodal gradients of X = W / rho, scaled by the diffusion coefficient
    let mut flux = vec![Vec3::zeros(); nn * nv];
    for i in 0..nn {
        let [a, b] = dual.face_tets[i];
        for v in 0..nv {
            let g = if b == NONE {
                gw[a * nv + v]
            } else {
                (gw[a * nv + v] + gw[b * nv + v]) * 0.5
            };
            flux[i * nv + v] = g * (inv_rho * coef[i * nv + v]);
        }
    }
    let n_scalar_rates = sources.scalar_rates.len();
    if n_scalar_rates != 0 && n_scalar_rates != lay.n_scalars() {
        return Err(Error::Size {
            what: "scalar rates",
            expected: lay.n_scalars(),
            actual: n_scalar_rates,
        });
    }
    let flux_diffusion = if cfg.lader_flux_diffusion { 2.0 } else { 0.0 };

    let mut dw_dt = vec![0.0; nt * nv];
    // diffusion-only rate on each element, averaged to the nodes afterwards
    let mut diff_rate = vec![0.0; nt * nv];
    for t in 0..nt {
        let f = dual.tet_faces[t];
        let b = &dual.tet_basis_grad[t];
        let gk = [-3.0 * b[0], -3.0 * b[1], -3.0 * b[2], -3.0 * b[3]];
        let mut un = [0.0; 4];
        for k in 0..4 {
            un[k] = velocity_of(w, nv, f[k], inv_rho).dot(&gk[k]);
        }
        let grad_pi = dual.vertex_field_gradient(fe, t, &state.pi);
        for v in 0..nv {
            let mut div_uw = 0.0;
            let mut div_flux = 0.0;
            for k in 0..4 {
                div_uw += un[k] * w[f[k] * nv + v];
                div_flux += flux[f[k] * nv + v].dot(&gk[k]);
            }
            let mut rate = 0.0;
            if v < 3 {
                if let Some(kk) = lay.k {
                    rate -= 2.0 / 3.0 * gw[t * nv + kk][v];
                }
                diff_rate[t * nv + v] = div_flux + rate;
                rate -= grad_pi[v];
                if !sources.f_u.is_empty() {
                    rate += 0.25 * (0..4).map(|k| sources.f_u[f[k]][v]).sum::<f64>();
                }
            } else {
                diff_rate[t * nv + v] = div_flux;
                if n_scalar_rates != 0 {
                    let r = &sources.scalar_rates[v - 3];
                    rate += 0.25 * (r[f[0]] + r[f[1]] + r[f[2]] + r[f[3]]);
                }
            }
            dw_dt[t * nv + v] = -div_uw + flux_diffusion * div_flux + rate;
        }
    }

    let mut x_bar = vec![0.0; nn * nv];
    for i in 0..nn {
        let [a, b] = dual.face_tets[i];
        for v in 0..nv {
            let d = if b == NONE {
                diff_rate[a * nv + v]
            } else {
                0.5 * (diff_rate[a * nv + v] + diff_rate[b * nv + v])
            };
            x_bar[i * nv + v] = (w[i * nv + v] + 0.5 * dt * d) * inv_rho;
        }
    }
    Ok(LaderEvolution { dw_dt, x_bar })
}

#[allow(clippy::too_many_arguments)]
fn advect_lader(
    dual: &DualMesh,
    cfg: &SchemeConfig,
    w: &[f64],
    gw: &[Vec3],
    dw_dt: &[f64],
    nv: usize,
    inv_rho: f64,
    dt: f64,
    res: &mut [f64],
) {
    let mut wi_bar = vec![0.0; nv];
    let mut wj_bar = vec![0.0; nv];
    for f in &dual.interfaces {
        let (i, j, t) = (f.i, f.j, f.tet);
        let ri = f.centroid - dual.nodes[i];
        let rj = f.centroid - dual.nodes[j];
        for v in 0..nv {
            let g_aux = &gw[t * nv + v];
            let gi = super::flux::eno_select(&gw[f.tet_l * nv + v], g_aux, &ri);
            let gj = super::flux::eno_select(&gw[f.tet_r * nv + v], g_aux, &rj);
            let (a, b) = lader_evolve_flux_states(
                extrapolate(w[i * nv + v], &gi, &ri),
                extrapolate(w[j * nv + v], &gj, &rj),
                dw_dt[t * nv + v],
                dt,
            );
            wi_bar[v] = a;
            wj_bar[v] = b;
        }
        let un_i = Vec3::new(wi_bar[0], wi_bar[1], wi_bar[2]).dot(&f.eta) * inv_rho;
        let un_j = Vec3::new(wj_bar[0], wj_bar[1], wj_bar[2]).dot(&f.eta) * inv_rho;
        for v in 0..nv {
            let alpha = alpha_from_normal_speeds(un_i, un_j, cfg.alpha_mode, Layout::class(v));
            let phi = rusanov_flux(wi_bar[v], wj_bar[v], un_i, un_j, alpha);
            res[i * nv + v] += phi;
            res[j * nv + v] -= phi;
        }
    }
}

/// Galerkin diffusion on every interface. `gx` holds element gradients of
/// the primitive unknowns and `w` the conservative values used for the
/// turbulent pressure term.
fn diffuse_galerkin(dual: &DualMesh, gx: &[Vec3], w: &[f64], coef: &[f64], lay: &Layout, res: &mut [f64]) {
    let nv = lay.nv;
    for f in &dual.interfaces {
        let (i, j, t) = (f.i, f.j, f.tet);
        for v in 0..nv {
            let c = face_coefficient(coef[i * nv + v], coef[j * nv + v]);
            let q = viscous_flux_galerkin(c, &gx[t * nv + v], &f.eta);
            res[i * nv + v] -= q;
            res[j * nv + v] += q;
        }
        if let Some(k) = lay.k {
            let p = (w[i * nv + k] + w[j * nv + k]) / 3.0;
            for a in 0..3 {
                res[i * nv + a] += p * f.eta[a];
                res[j * nv + a] -= p * f.eta[a];
            }
        }
    }
}

fn diffuse_orthogonal(dual: &DualMesh, w: &[f64], coef: &[f64], lay: &Layout, inv_rho: f64, res: &mut [f64]) {
    let nv = lay.nv;
    for f in &dual.interfaces {
        let (i, j) = (f.i, f.j);
        let dist = (dual.nodes[j] - dual.nodes[i]).norm();
        let area = f.eta.norm();
        for v in 0..nv {
            let c = face_coefficient(coef[i * nv + v], coef[j * nv + v]);
            let q = viscous_flux_orthogonal(c, w[i * nv + v] * inv_rho, w[j * nv + v] * inv_rho, dist, area);
            res[i * nv + v] -= q;
            res[j * nv + v] += q;
        }
        if let Some(k) = lay.k {
            let p = (w[i * nv + k] + w[j * nv + k]) / 3.0;
            for a in 0..3 {
                res[i * nv + a] += p * f.eta[a];
                res[j * nv + a] -= p * f.eta[a];
            }
        }
    }
}

/// Boundary-face counterpart of the `(2/3) rho k` term carried by the interfaces.
fn turbulent_pressure_boundary(dual: &DualMesh, w: &[f64], nv: usize, k: usize, res: &mut [f64]) {
    for i in 0..dual.n_nodes() {
        if dual.is_boundary(i) {
            let p = 2.0 / 3.0 * w[i * nv + k];
            for a in 0..3 {
                res[i * nv + a] += p * dual.boundary_normal[i][a];
            }
        }
    }
}

/// Pressure terms on interfaces and boundary faces plus the advective flux
/// leaving through boundary faces (zero-gradient extrapolation).
fn pressure_and_boundary(dual: &DualMesh, pi: &[f64], w: &[f64], nv: usize, inv_rho: f64, res: &mut [f64]) {
    for f in &dual.interfaces {
        let v = f.vertices;
        let p = pressure_face_term([pi[v[0]], pi[v[1]], pi[v[2]], pi[v[3]]], &f.eta);
        for a in 0..3 {
            res[f.i * nv + a] += p[a];
            res[f.j * nv + a] -= p[a];
        }
    }
    for i in 0..dual.n_nodes() {
        if !dual.is_boundary(i) {
            continue;
        }
        let n = dual.boundary_normal[i];
        let fv = dual.face_vertices[i];
        let pm = (pi[fv[0]] + pi[fv[1]] + pi[fv[2]]) / 3.0;
        let un = velocity_of(w, nv, i, inv_rho).dot(&n);
        for v in 0..nv {
            res[i * nv + v] += un * w[i * nv + v];
        }
        for a in 0..3 {
            res[i * nv + a] += pm * n[a];
        }
    }
}
