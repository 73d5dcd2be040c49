//! Diffusion fluxes through an interface.

use crate::geometry::Vec3;

/// Galerkin diffusion flux `coeff * grad . eta` with the gradient taken on
/// the element containing the interface.
#[inline]
pub fn viscous_flux_galerkin(coeff: f64, grad: &Vec3, eta: &Vec3) -> f64 {
    coeff * grad.dot(eta)
}

/// Two-point flux along the segment joining the nodes; drops the
/// non-orthogonal part of the gradient.
#[inline]
pub fn viscous_flux_orthogonal(coeff: f64, x_i: f64, x_j: f64, distance: f64, area: f64) -> f64 {
    coeff * (x_j - x_i) / distance * area
}

/// The `-(2/3) rho k` contribution on an interface, from the two nodal values of `W_k`.
#[inline]
pub fn turbulent_pressure_flux(w_k_i: f64, w_k_j: f64, eta: &Vec3) -> Vec3 {
    -(w_k_i + w_k_j) / 3.0 * eta
}

/// Arithmetic mean of the two nodal coefficients.
#[inline]
pub fn face_coefficient(a_i: f64, a_j: f64) -> f64 {
    0.5 * (a_i + a_j)
}
