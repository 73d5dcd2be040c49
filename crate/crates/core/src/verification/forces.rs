//! Drag and lift on a tagged surface and pressure probes.

use crate::error::{Error, Result};
use crate::fields::FlowState;
use crate::geometry::{barycentric, Grad3, Point, Vec3};
use crate::mesh::{DualMesh, FeMesh};

/// `c = F * 500 / 0.41` for the channel benchmark.
pub const CYLINDER_SCALE: f64 = 500.0 / 0.41;

/// One surface triangle: inward (into the fluid) unit normal, its area, the
/// pressure at the centroid and the velocity gradient of the adjacent element.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceSample {
    pub normal: Vec3,
    pub area: f64,
    pub pi: f64,
    pub grad_u: Grad3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceCoefficients {
    pub f_d: f64,
    pub f_l: f64,
    pub c_d: f64,
    pub c_l: f64,
}

/// One-point quadrature of
/// `F_d = int mu du_t/dn n_y - pi n_x`, `F_l = int -mu du_t/dn n_x - pi n_y`
/// with `t = (n_y, -n_x, 0)`.
pub fn surface_forces(samples: &[SurfaceSample], mu: f64) -> ForceCoefficients {
    let (mut f_d, mut f_l) = (0.0, 0.0);
    for s in samples {
        let n = Vec3::new(s.normal.x, s.normal.y, 0.0);
        let tau = Vec3::new(n.y, -n.x, 0.0);
        let dut_dn = tau.dot(&(s.grad_u * n));
        f_d += s.area * (mu * dut_dn * n.y - s.pi * n.x);
        f_l += s.area * (-mu * dut_dn * n.x - s.pi * n.y);
    }
    ForceCoefficients {
        f_d,
        f_l,
        c_d: CYLINDER_SCALE * f_d,
        c_l: CYLINDER_SCALE * f_l,
    }
}

/// Samples every boundary face carrying `tag`.
pub fn surface_samples(state: &FlowState, dual: &DualMesh, tag: i32, rho: f64) -> Vec<SurfaceSample> {
    let comp = |a: usize| state.w_u.iter().map(|w| w[a] / rho).collect::<Vec<_>>();
    let u = [comp(0), comp(1), comp(2)];
    (0..dual.n_nodes())
        .filter(|&i| dual.boundary_tag[i] == Some(tag))
        .map(|i| {
            let t = dual.face_tets[i][0];
            let mut g = Grad3::zeros();
            for (a, ua) in u.iter().enumerate() {
                g.set_row(a, &dual.node_field_gradient(t, ua).transpose());
            }
            let bn = dual.boundary_normal[i];
            let area = bn.norm();
            let fv = dual.face_vertices[i];
            SurfaceSample {
                normal: -bn / area,
                area,
                pi: (state.pi[fv[0]] + state.pi[fv[1]] + state.pi[fv[2]]) / 3.0,
                grad_u: g,
            }
        })
        .collect()
}

/// P1 interpolation of the vertex pressure at `p`.
pub fn pressure_at(pi: &[f64], dual: &DualMesh, fe: &FeMesh, p: &Point) -> Result<f64> {
    let t = dual
        .locate(fe, p)
        .ok_or_else(|| Error::InvalidArgument(format!("probe point {:?} outside the mesh", p.as_slice())))?;
    let b = barycentric(&fe.tet_points(t), p);
    let v = fe.tets[t];
    Ok((0..4).map(|k| b[k] * pi[v[k]]).sum())
}

/// Force coefficients on the surface `tag` and the pressure difference
/// between `probes[0]` and `probes[1]`.
pub fn drag_lift(
    state: &FlowState,
    dual: &DualMesh,
    fe: &FeMesh,
    tag: i32,
    mu: f64,
    rho: f64,
    probes: [Point; 2],
) -> Result<(ForceCoefficients, f64)> {
    let samples = surface_samples(state, dual, tag, rho);
    if samples.is_empty() {
        return Err(Error::Boundary(format!("no boundary faces with tag {tag}")));
    }
    let f = surface_forces(&samples, mu);
    let dpi = pressure_at(&state.pi, dual, fe, &probes[0])? - pressure_at(&state.pi, dual, fe, &probes[1])?;
    Ok((f, dpi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_box_mesh, BoxExtents};
    use approx::assert_relative_eq;

    fn setup() -> (FeMesh, DualMesh) {
        let fe = generate_box_mesh([3, 4, 2], BoxExtents::new([0.0, 0.0, 0.0], [1.0, 2.0, 0.5])).unwrap();
        let dual = DualMesh::build(&fe).unwrap();
        (fe, dual)
    }

    fn state(fe: &FeMesh, dual: &DualMesh, pi: impl Fn(&Point) -> f64, u: impl Fn(&Point) -> Vec3) -> FlowState {
        let mut s = FlowState::zeros(dual.n_nodes(), fe.vertices.len(), 0);
        s.pi = fe.vertices.iter().map(&pi).collect();
        s.w_u = dual.nodes.iter().map(&u).collect();
        s
    }

    #[test]
    fn constant_pressure_on_closed_surface() {
        let (fe, dual) = setup();
        let s = state(&fe, &dual, |_| 3.7, |_| Vec3::zeros());
        // tag every face: the whole closed boundary
        let mut samples = Vec::new();
        for tag in 1..=6 {
            samples.extend(surface_samples(&s, &dual, tag, 1.0));
        }
        let f = surface_forces(&samples, 1e-3);
        assert!(f.f_d.abs() < 1e-13 && f.f_l.abs() < 1e-13);
    }

    #[test]
    fn linear_pressure_gives_volume_integral() {
        // with inward normals -int pi n dS = int grad(pi) dV
        let (fe, dual) = setup();
        let s = state(&fe, &dual, |p| 2.0 * p.x - 0.5 * p.y + p.z, |_| Vec3::zeros());
        let mut samples = Vec::new();
        for tag in 1..=6 {
            samples.extend(surface_samples(&s, &dual, tag, 1.0));
        }
        let f = surface_forces(&samples, 1e-3);
        assert_relative_eq!(f.f_d, 2.0, epsilon = 1e-12);
        assert_relative_eq!(f.f_l, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn flat_strip_scaling() {
        // inward normal +x, pi = -n_x = -1, unit area split in two triangles
        let s = SurfaceSample {
            normal: Vec3::x(),
            area: 0.5,
            pi: -1.0,
            grad_u: Grad3::zeros(),
        };
        let f = surface_forces(&[s, s], 0.0);
        assert_relative_eq!(f.f_d, 1.0, epsilon = 1e-15);
        assert_relative_eq!(f.c_d, CYLINDER_SCALE, epsilon = 1e-12);
        assert_eq!(f.f_l, 0.0);
    }

    #[test]
    fn shear_on_a_wall() {
        // u = (s*y, 0, 0) seen from a wall with inward normal +y:
        // du_t/dn = d(u.(1,0,0))/dy = s, so F_d = mu s area
        let mut g = Grad3::zeros();
        g[(0, 1)] = 2.0;
        let s = SurfaceSample {
            normal: Vec3::y(),
            area: 0.3,
            pi: 0.0,
            grad_u: g,
        };
        let f = surface_forces(&[s], 0.1);
        assert_relative_eq!(f.f_d, 0.06, epsilon = 1e-15);
        assert_eq!(f.f_l, 0.0);
    }

    #[test]
    fn probes_interpolate_linear_pressure() {
        let (fe, dual) = setup();
        let s = state(&fe, &dual, |p| 1.0 + 3.0 * p.x + p.y - 2.0 * p.z, |_| Vec3::zeros());
        let (p1, p2) = (Point::new(0.31, 0.77, 0.2), Point::new(0.9, 1.3, 0.41));
        let (_, dpi) = drag_lift(&s, &dual, &fe, 1, 1.0, 1.0, [p1, p2]).unwrap();
        assert_relative_eq!(dpi, 3.0 * (0.31 - 0.9) + (0.77 - 1.3) - 2.0 * (0.2 - 0.41), epsilon = 1e-12);
        assert!(drag_lift(&s, &dual, &fe, 1, 1.0, 1.0, [Point::new(5.0, 0.0, 0.0), p2]).is_err());
        assert!(drag_lift(&s, &dual, &fe, 99, 1.0, 1.0, [p1, p2]).is_err());
    }
}
