//! Small geometric kernels shared by the mesh and the schemes.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;
pub type Vec3 = Vector3<f64>;
/// Gradient of a vector field: row `a` holds the gradient of component `a`.
pub type Grad3 = Matrix3<f64>;

/// Signed volume of the tetrahedron `(a, b, c, d)`; positive when `d` lies on
/// the side of `(b - a) x (c - a)`.
pub fn signed_tet_volume(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

/// Area-weighted normal of triangle `(a, b, c)` following the right-hand rule.
pub fn triangle_area_normal(a: &Point, b: &Point, c: &Point) -> Vec3 {
    0.5 * (b - a).cross(&(c - a))
}

/// Gradient of the unique affine function taking `values[k]` at `points[k]`.
pub fn galerkin_gradient(points: &[Point; 4], values: &[f64; 4]) -> Result<Vec3> {
    let m = Matrix3::from_rows(&[
        (points[1] - points[0]).transpose(),
        (points[2] - points[0]).transpose(),
        (points[3] - points[0]).transpose(),
    ]);
    let scale = (points[1] - points[0])
        .norm()
        .max((points[2] - points[0]).norm())
        .max((points[3] - points[0]).norm());
    if m.determinant().abs() <= 1e-14 * scale.powi(3) {
        return Err(Error::SingularGeometry(
            "sample points are coplanar".to_string(),
        ));
    }
    let rhs = Vec3::new(
        values[1] - values[0],
        values[2] - values[0],
        values[3] - values[0],
    );
    m.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularGeometry("interpolation system is singular".to_string()))
}

/// Gradients of the four P1 barycentric basis functions of a tetrahedron.
pub fn p1_basis_gradients(v: &[Point; 4]) -> Result<[Vec3; 4]> {
    let e1 = v[1] - v[0];
    let e2 = v[2] - v[0];
    let e3 = v[3] - v[0];
    let det = e1.cross(&e2).dot(&e3);
    let scale = e1.norm().max(e2.norm()).max(e3.norm());
    if det.abs() <= 1e-14 * scale.powi(3) {
        return Err(Error::SingularGeometry("degenerate tetrahedron".to_string()));
    }
    let g1 = e2.cross(&e3) / det;
    let g2 = e3.cross(&e1) / det;
    let g3 = e1.cross(&e2) / det;
    Ok([-(g1 + g2 + g3), g1, g2, g3])
}

/// Barycentric coordinates of `p` with respect to tetrahedron `v`.
pub fn barycentric(v: &[Point; 4], p: &Point) -> [f64; 4] {
    let vol = signed_tet_volume(&v[0], &v[1], &v[2], &v[3]);
    let l0 = signed_tet_volume(p, &v[1], &v[2], &v[3]) / vol;
    let l1 = signed_tet_volume(&v[0], p, &v[2], &v[3]) / vol;
    let l2 = signed_tet_volume(&v[0], &v[1], p, &v[3]) / vol;
    [l0, l1, l2, 1.0 - l0 - l1 - l2]
}

pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}
