//! Pointwise numerical flux kernels. States are scalar components; vector
//! unknowns go through them one component at a time.

use crate::fields::AlphaMode;
use crate::geometry::{minmod, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationClass {
    Momentum,
    Scalar,
}

#[inline]
pub fn alpha_from_normal_speeds(un_i: f64, un_j: f64, mode: AlphaMode, class: EquationClass) -> f64 {
    let m = un_i.abs().max(un_j.abs());
    match (mode, class) {
        (AlphaMode::Decoupled, EquationClass::Scalar) => m,
        _ => 2.0 * m,
    }
}

/// Rusanov dissipation coefficient for the interface with normal `eta`.
pub fn rusanov_alpha(u_i: &Vec3, u_j: &Vec3, eta: &Vec3, mode: AlphaMode, class: EquationClass) -> f64 {
    alpha_from_normal_speeds(u_i.dot(eta), u_j.dot(eta), mode, class)
}

/// `(Z(W_i) + Z(W_j))/2 - alpha (W_j - W_i)/2` with `Z(W) = (U.eta) W`;
/// `un_*` are the normal speeds `U.eta`.
#[inline]
pub fn rusanov_flux(w_i: f64, w_j: f64, un_i: f64, un_j: f64, alpha: f64) -> f64 {
    0.5 * (un_i * w_i + un_j * w_j) - 0.5 * alpha * (w_j - w_i)
}

/// Limited Kolgan slopes `(Delta_L, Delta_R)` from the gradients on the
/// upwind elements and the segment `d = N_j - N_i`.
#[inline]
pub fn kolgan_slopes(grad_l: &Vec3, grad_r: &Vec3, d: &Vec3, w_i: f64, w_j: f64) -> (f64, f64) {
    let jump = w_j - w_i;
    (
        minmod(0.5 * grad_l.dot(d), jump),
        minmod(0.5 * grad_r.dot(d), jump),
    )
}

/// Kolgan-type flux: centred part on cell values, dissipation on the
/// reconstructions `w_il = W_i + Delta_L`, `w_jr = W_j - Delta_R`.
#[inline]
pub fn kolgan_flux(w_i: f64, w_j: f64, w_il: f64, w_jr: f64, un_i: f64, un_j: f64, alpha: f64) -> f64 {
    0.5 * (un_i * w_i + un_j * w_j) - 0.5 * alpha * (w_jr - w_il)
}

/// ENO choice between the gradient on the upwind element and on the
/// element containing the interface; ties keep the upwind one.
#[inline]
pub fn eno_select(grad_upwind: &Vec3, grad_aux: &Vec3, r: &Vec3) -> Vec3 {
    if grad_upwind.dot(r).abs() <= grad_aux.dot(r).abs() {
        *grad_upwind
    } else {
        *grad_aux
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alpha_examples() {
        let eta = Vec3::new(1.0, 0.0, 0.0);
        let ui = Vec3::new(1.0, 5.0, 0.0);
        let uj = Vec3::new(-2.0, 0.0, 3.0);
        assert_eq!(rusanov_alpha(&ui, &uj, &eta, AlphaMode::Coupled, EquationClass::Scalar), 4.0);
        assert_eq!(rusanov_alpha(&ui, &uj, &eta, AlphaMode::Decoupled, EquationClass::Momentum), 4.0);
        assert_eq!(rusanov_alpha(&ui, &uj, &eta, AlphaMode::Decoupled, EquationClass::Scalar), 2.0);
        let z = Vec3::zeros();
        assert_eq!(rusanov_alpha(&z, &z, &eta, AlphaMode::Coupled, EquationClass::Momentum), 0.0);
    }

    #[test]
    fn rusanov_examples() {
        assert_eq!(rusanov_flux(1.0, 0.0, 1.0, 1.0, 2.0), 1.5);
        assert_eq!(rusanov_flux(3.0, 3.0, 0.5, 0.5, 7.0), 1.5);
    }

    #[test]
    fn kolgan_degenerates_to_rusanov() {
        let (l, r) = kolgan_slopes(&Vec3::zeros(), &Vec3::zeros(), &Vec3::new(1.0, 0.0, 0.0), 1.0, 2.0);
        assert_eq!((l, r), (0.0, 0.0));
        assert_eq!(
            kolgan_flux(1.0, 2.0, 1.0 + l, 2.0 - r, 0.3, -0.2, 0.6),
            rusanov_flux(1.0, 2.0, 0.3, -0.2, 0.6)
        );
    }

    #[test]
    fn kolgan_reconstructions_meet_on_affine_data() {
        // W = 2x sampled at x=0 and x=1 with exact gradients
        let g = Vec3::new(2.0, 0.0, 0.0);
        let d = Vec3::new(1.0, 0.0, 0.0);
        let (l, r) = kolgan_slopes(&g, &g, &d, 0.0, 2.0);
        let (wl, wr) = (0.0 + l, 2.0 - r);
        assert_eq!(wl, wr);
        let f = kolgan_flux(0.0, 2.0, wl, wr, 1.0, 1.0, 2.0);
        assert_eq!(f, 1.0);
    }

    #[test]
    fn kolgan_slopes_vanish_on_opposite_signs() {
        let (l, r) = kolgan_slopes(
            &Vec3::new(-1.0, 0.0, 0.0),
            &Vec3::new(1.0, 0.0, 0.0),
            &Vec3::new(1.0, 0.0, 0.0),
            0.0,
            1.0,
        );
        assert_eq!(l, 0.0);
        assert_eq!(r, 0.5);
    }

    #[test]
    fn eno_examples() {
        let r = Vec3::new(1.0, 0.0, 0.0);
        let a = Vec3::new(0.1, 9.0, 0.0);
        let b = Vec3::new(0.5, 0.0, 0.0);
        assert_eq!(eno_select(&a, &b, &r), a);
        assert_eq!(eno_select(&b, &a, &r), a);
        assert_eq!(eno_select(&b, &b, &r), b);
        let c = Vec3::new(-0.5, 1.0, 0.0);
        assert_eq!(eno_select(&c, &b, &r), c);
    }

    proptest! {
        #[test]
        fn rusanov_is_antisymmetric(
            wi in -10.0..10.0f64, wj in -10.0..10.0f64,
            ui in prop::array::uniform3(-3.0..3.0f64), uj in prop::array::uniform3(-3.0..3.0f64),
            eta in prop::array::uniform3(-1.0..1.0f64),
        ) {
            let (ui, uj, eta) = (Vec3::from(ui), Vec3::from(uj), Vec3::from(eta));
            for class in [EquationClass::Momentum, EquationClass::Scalar] {
                let a = rusanov_alpha(&ui, &uj, &eta, AlphaMode::Decoupled, class);
                let b = rusanov_alpha(&uj, &ui, &-eta, AlphaMode::Decoupled, class);
                prop_assert_eq!(a, b);
                let f = rusanov_flux(wi, wj, ui.dot(&eta), uj.dot(&eta), a);
                let g = rusanov_flux(wj, wi, uj.dot(&-eta), ui.dot(&-eta), b);
                prop_assert!((f + g).abs() <= 1e-12 * (1.0 + f.abs()));
            }
        }

        #[test]
        fn minmod_bounds(a in -5.0..5.0f64, b in -5.0..5.0f64) {
            let m = minmod(a, b);
            prop_assert!(m.abs() <= a.abs().min(b.abs()));
            if a * b < 0.0 { prop_assert_eq!(m, 0.0); }
        }

        #[test]
        fn eno_picks_smaller_projection(
            g1 in prop::array::uniform3(-3.0..3.0f64), g2 in prop::array::uniform3(-3.0..3.0f64),
            r in prop::array::uniform3(-1.0..1.0f64),
        ) {
            let (g1, g2, r) = (Vec3::from(g1), Vec3::from(g2), Vec3::from(r));
            let c = eno_select(&g1, &g2, &r);
            prop_assert_eq!(c.dot(&r).abs(), g1.dot(&r).abs().min(g2.dot(&r).abs()));
        }
    }
}
