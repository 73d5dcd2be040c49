//! Evolution of the reconstructed interface states to the half time step.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Half-step evolution used by the solver: both sides of the interface move
/// by `dt/2` times the local estimate of `dW/dt` on the element containing
/// the interface.
#[inline]
pub fn lader_evolve_flux_states(w_i_nij: f64, w_j_nij: f64, dw_dt: f64, dt: f64) -> (f64, f64) {
    let c = 0.5 * dt * dw_dt;
    (w_i_nij + c, w_j_nij + c)
}

/// Evolved states following the literal one-length formula
/// `W - dt/(2L) (Z_i + Z_j) + dt/(2L^2) (a_i g_i.eta + a_j g_j.eta)`.
///
/// Kept for comparison only: with area-weighted normals this correction does
/// not vanish for a uniform stream, so the solver uses
/// [`lader_evolve_flux_states`].
#[allow(clippy::too_many_arguments)]
pub fn lader_evolve_flux_states_literal(
    w_i_nij: f64,
    w_j_nij: f64,
    un_i: f64,
    un_j: f64,
    diff_i: f64,
    diff_j: f64,
    length: f64,
    dt: f64,
    with_diffusion: bool,
) -> Result<(f64, f64)> {
    if !(length > 0.0) {
        return Err(Error::SingularGeometry("zero interface length".into()));
    }
    let mut c = -dt / (2.0 * length) * (un_i * w_i_nij + un_j * w_j_nij);
    if with_diffusion {
        c += dt / (2.0 * length * length) * (diff_i + diff_j);
    }
    Ok((w_i_nij + c, w_j_nij + c))
}

/// Boundary-extrapolated value `W_s + (N_ij - N_s).grad`.
#[inline]
pub fn extrapolate(w: f64, grad: &Vec3, r: &Vec3) -> f64 {
    w + grad.dot(r)
}
