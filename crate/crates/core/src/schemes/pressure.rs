//! Pressure integral over an interface.

use crate::geometry::Vec3;

/// `[5/12 (pi_1 + pi_2) + 1/12 (pi_3 + pi_4)] eta`, with `pi_1`, `pi_2` at the
/// shared-edge vertices of the interface and `pi_3`, `pi_4` at the other two
/// vertices of the element. This is the exact mean of a linear pressure over
/// the triangle (edge, element barycentre).
#[inline]
pub fn pressure_face_term(pi: [f64; 4], eta: &Vec3) -> Vec3 {
    (5.0 / 12.0 * (pi[0] + pi[1]) + 1.0 / 12.0 * (pi[2] + pi[3])) * eta
}
