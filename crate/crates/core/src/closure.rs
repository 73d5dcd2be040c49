//! k-epsilon closure and the pointwise reaction/source updates.

use crate::fields::TurbulenceCoeffs;
use crate::geometry::Grad3;

/// `mu_t = rho C_mu k^2 / eps` from the conservative values.
pub fn turbulent_viscosity(w_k: f64, w_eps: f64, rho: f64, c_mu: f64, eps_floor: f64) -> f64 {
    let k = w_k / rho;
    let eps = (w_eps / rho).max(eps_floor);
    rho * c_mu * k * k / eps
}

/// `G_k = (mu_t/2) sum_ij (du_i/dx_j + du_j/dx_i)^2`.
pub fn production_gk(grad_u: &Grad3, mu_t: f64) -> f64 {
    let s = grad_u + grad_u.transpose();
    0.5 * mu_t * s.iter().map(|x| x * x).sum::<f64>()
}

/// Inputs of the semi-implicit k-epsilon reaction step at one node.
#[derive(Debug, Clone, Copy)]
pub struct KEpsReaction {
    pub w_k_tilde: f64,
    pub w_eps_tilde: f64,
    pub w_k_old: f64,
    pub w_eps_old: f64,
    pub g_k: f64,
    pub f_k: f64,
    pub f_eps: f64,
}

/// Production is taken at the new velocities, the dissipation of k with the
/// old epsilon, and the epsilon sink implicitly, then both are floored.
pub fn reaction_update_k_eps(
    r: &KEpsReaction,
    dt: f64,
    coeffs: &TurbulenceCoeffs,
    rho: f64,
    k_floor: f64,
    eps_floor: f64,
) -> (f64, f64) {
    let w_k_old = r.w_k_old.max(rho * k_floor);
    let w_eps_old = r.w_eps_old.max(rho * eps_floor);
    let ratio = w_eps_old / w_k_old;
    let k_new = r.w_k_tilde + dt * (r.g_k - w_eps_old + r.f_k);
    let eps_new = (r.w_eps_tilde + dt * (coeffs.c1_eps * ratio * r.g_k + r.f_eps)) / (1.0 + dt * coeffs.c2_eps * ratio);
    (k_new.max(rho * k_floor), eps_new.max(rho * eps_floor))
}

/// `W_y + dt f_y`.
pub fn species_source_update(w_y_tilde: f64, f_y: f64, dt: f64) -> f64 {
    w_y_tilde + dt * f_y
}
