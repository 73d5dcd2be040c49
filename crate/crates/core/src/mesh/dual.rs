use std::collections::HashMap;

use super::FeMesh;
use crate::error::{Error, Result};
use crate::geometry::{p1_basis_gradients, triangle_area_normal, Point, Vec3};

/// Marker for a missing element index.
pub const NONE: usize = usize::MAX;

/// Local vertex pairs of a tet's six edges.
const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The dual face between the cells of two faces of the same element.
#[derive(Debug, Clone)]
pub struct Interface {
    pub i: usize,
    pub j: usize,
    /// Area-weighted normal pointing from cell `i` into cell `j`.
    pub eta: Vec3,
    pub centroid: Point,
    /// Element containing the interface.
    pub tet: usize,
    /// Element across face `i` (or `tet` on the boundary).
    pub tet_l: usize,
    /// Element across face `j` (or `tet` on the boundary).
    pub tet_r: usize,
    /// FE vertices of the shared edge, then the vertex of face `i` and of face `j`
    /// off that edge. The pressure quadrature weights follow this order.
    pub vertices: [usize; 4],
}

#[derive(Debug, Clone)]
pub struct DualMesh {
    pub nodes: Vec<Point>,
    pub face_vertices: Vec<[usize; 3]>,
    /// Owning elements of each face; the second is `NONE` on the boundary.
    pub face_tets: Vec<[usize; 2]>,
    pub boundary_tag: Vec<Option<i32>>,
    /// Outward area normal of the FE boundary face, zero for interior nodes.
    pub boundary_normal: Vec<Vec3>,
    pub cell_volume: Vec<f64>,
    pub surface_area: Vec<f64>,
    pub char_length: Vec<f64>,
    pub interfaces: Vec<Interface>,
    neighbor_offsets: Vec<usize>,
    neighbor_list: Vec<(usize, usize)>,
    /// Face index opposite each local vertex of every element.
    pub tet_faces: Vec<[usize; 4]>,
    pub tet_volume: Vec<f64>,
    pub tet_barycenter: Vec<Point>,
    /// Gradients of the P1 basis functions of every element.
    pub tet_basis_grad: Vec<[Vec3; 4]>,
    pub n_vertices: usize,
    /// Lumped vertex volumes (a quarter of every adjacent element).
    pub vertex_volume: Vec<f64>,
}

fn sorted3(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

impl DualMesh {
    pub fn build(fe: &FeMesh) -> Result<Self> {
        let nt = fe.tets.len();
        let mut face_index: HashMap<[usize; 3], usize> = HashMap::with_capacity(2 * nt + 16);
        let mut face_vertices: Vec<[usize; 3]> = Vec::with_capacity(2 * nt + 16);
        let mut face_tets: Vec<[usize; 2]> = Vec::with_capacity(2 * nt + 16);
        let mut tet_faces = vec![[0usize; 4]; nt];
        for (t, tet) in fe.tets.iter().enumerate() {
            for k in 0..4 {
                let mut f = [0usize; 3];
                let mut c = 0;
                for (m, &v) in tet.iter().enumerate() {
                    if m != k {
                        f[c] = v;
                        c += 1;
                    }
                }
                let key = sorted3(f);
                let idx = *face_index.entry(key).or_insert_with(|| {
                    face_vertices.push(key);
                    face_tets.push([NONE, NONE]);
                    face_vertices.len() - 1
                });
                let slot = &mut face_tets[idx];
                if slot[0] == NONE {
                    slot[0] = t;
                } else if slot[1] == NONE {
                    slot[1] = t;
                } else {
                    return Err(Error::Topology(format!(
                        "face {key:?} is shared by more than two elements"
                    )));
                }
                tet_faces[t][k] = idx;
            }
        }
        let nf = face_vertices.len();

        let mut boundary_tag = vec![None; nf];
        for (face, tag) in &fe.boundary_faces {
            let key = sorted3(*face);
            match face_index.get(&key) {
                Some(&idx) if face_tets[idx][1] == NONE => boundary_tag[idx] = Some(*tag),
                Some(_) => {
                    return Err(Error::Topology(format!(
                        "boundary face {key:?} is shared by two elements"
                    )))
                }
                None => {
                    return Err(Error::Topology(format!(
                        "boundary face {key:?} does not belong to any element"
                    )))
                }
            }
        }
        for idx in 0..nf {
            if face_tets[idx][1] == NONE && boundary_tag[idx].is_none() {
                boundary_tag[idx] = Some(0);
            }
        }

        let nodes: Vec<Point> = face_vertices
            .iter()
            .map(|f| (fe.vertices[f[0]] + fe.vertices[f[1]] + fe.vertices[f[2]]) / 3.0)
            .collect();

        let mut tet_volume = Vec::with_capacity(nt);
        let mut tet_barycenter = Vec::with_capacity(nt);
        let mut tet_basis_grad = Vec::with_capacity(nt);
        let mut vertex_volume = vec![0.0; fe.vertices.len()];
        for t in 0..nt {
            let p = fe.tet_points(t);
            let vol = fe.tet_volume(t);
            tet_volume.push(vol);
            tet_barycenter.push((p[0] + p[1] + p[2] + p[3]) / 4.0);
            tet_basis_grad.push(p1_basis_gradients(&p)?);
            for &v in &fe.tets[t] {
                vertex_volume[v] += vol / 4.0;
            }
        }

        let mut cell_volume = vec![0.0; nf];
        let mut surface_area = vec![0.0; nf];
        let mut boundary_normal = vec![Vec3::zeros(); nf];
        let mut interfaces = Vec::with_capacity(6 * nt);
        for t in 0..nt {
            let tet = fe.tets[t];
            let p = fe.tet_points(t);
            let b = tet_barycenter[t];
            for k in 0..4 {
                cell_volume[tet_faces[t][k]] += tet_volume[t] / 4.0;
            }
            for &(k, l) in &EDGES {
                let others: Vec<usize> = (0..4).filter(|&m| m != k && m != l).collect();
                let (m, n) = (others[0], others[1]);
                // face i is opposite m (so it contains n), face j is opposite n
                let fi = tet_faces[t][m];
                let fj = tet_faces[t][n];
                let mut eta = triangle_area_normal(&p[k], &p[l], &b);
                if eta.dot(&(p[m] - p[n])) < 0.0 {
                    eta = -eta;
                }
                let other = |f: usize| {
                    let [a, c] = face_tets[f];
                    if a == t {
                        c
                    } else {
                        a
                    }
                };
                let tl = other(fi);
                let tr = other(fj);
                interfaces.push(Interface {
                    i: fi,
                    j: fj,
                    eta,
                    centroid: (p[k] + p[l] + b) / 3.0,
                    tet: t,
                    tet_l: if tl == NONE { t } else { tl },
                    tet_r: if tr == NONE { t } else { tr },
                    vertices: [tet[k], tet[l], tet[n], tet[m]],
                });
                let a = eta.norm();
                surface_area[fi] += a;
                surface_area[fj] += a;
            }
            for k in 0..4 {
                let f = tet_faces[t][k];
                if face_tets[f][1] == NONE {
                    let q: Vec<Point> = (0..4).filter(|&m| m != k).map(|m| p[m]).collect();
                    let mut nrm = triangle_area_normal(&q[0], &q[1], &q[2]);
                    if nrm.dot(&(q[0] - p[k])) < 0.0 {
                        nrm = -nrm;
                    }
                    boundary_normal[f] = nrm;
                    surface_area[f] += nrm.norm();
                }
            }
        }

        let char_length: Vec<f64> = cell_volume
            .iter()
            .zip(&surface_area)
            .map(|(v, s)| v / s)
            .collect();

        let mut counts = vec![0usize; nf + 1];
        for f in &interfaces {
            counts[f.i + 1] += 1;
            counts[f.j + 1] += 1;
        }
        for i in 0..nf {
            counts[i + 1] += counts[i];
        }
        let neighbor_offsets = counts.clone();
        let mut fill = counts;
        let mut neighbor_list = vec![(0, 0); 2 * interfaces.len()];
        for (e, f) in interfaces.iter().enumerate() {
            neighbor_list[fill[f.i]] = (f.j, e);
            fill[f.i] += 1;
            neighbor_list[fill[f.j]] = (f.i, e);
            fill[f.j] += 1;
        }

        Ok(DualMesh {
            nodes,
            face_vertices,
            face_tets,
            boundary_tag,
            boundary_normal,
            cell_volume,
            surface_area,
            char_length,
            interfaces,
            neighbor_offsets,
            neighbor_list,
            tet_faces,
            tet_volume,
            tet_barycenter,
            tet_basis_grad,
            n_vertices: fe.vertices.len(),
            vertex_volume,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_tets(&self) -> usize {
        self.tet_faces.len()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.face_tets[i][1] == NONE
    }

    /// Neighbouring nodes of `i` with the index of the shared interface.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.neighbor_list[self.neighbor_offsets[i]..self.neighbor_offsets[i + 1]]
    }

    /// Area normal of interface `e` seen from node `i`.
    pub fn outward_normal(&self, e: usize, i: usize) -> Vec3 {
        let f = &self.interfaces[e];
        if f.i == i {
            f.eta
        } else {
            -f.eta
        }
    }

    /// `L_ij = min(|C_i|/S(C_i), |C_j|/S(C_j))`.
    pub fn interface_length(&self, e: usize) -> f64 {
        let f = &self.interfaces[e];
        self.char_length[f.i].min(self.char_length[f.j])
    }

    /// Galerkin gradient on element `t` of a field sampled at its four face nodes.
    #[inline]
    pub fn face_gradient(&self, t: usize, values: [f64; 4]) -> Vec3 {
        let g = &self.tet_basis_grad[t];
        -3.0 * (g[0] * values[0] + g[1] * values[1] + g[2] * values[2] + g[3] * values[3])
    }

    /// Galerkin gradient on element `t` of a nodal scalar field.
    #[inline]
    pub fn node_field_gradient(&self, t: usize, field: &[f64]) -> Vec3 {
        let f = &self.tet_faces[t];
        self.face_gradient(t, [field[f[0]], field[f[1]], field[f[2]], field[f[3]]])
    }

    /// Galerkin gradient on element `t` of a P1 field given at FE vertices.
    #[inline]
    pub fn vertex_field_gradient(&self, fe: &FeMesh, t: usize, field: &[f64]) -> Vec3 {
        let v = &fe.tets[t];
        let g = &self.tet_basis_grad[t];
        g[0] * field[v[0]] + g[1] * field[v[1]] + g[2] * field[v[2]] + g[3] * field[v[3]]
    }

    /// Brute-force search for an element containing `p` (tolerance on barycentrics).
    pub fn locate(&self, fe: &FeMesh, p: &Point) -> Option<usize> {
        let tol = 1e-12;
        (0..fe.tets.len()).find(|&t| {
            let b = crate::geometry::barycentric(&fe.tet_points(t), p);
            b.iter().all(|&l| l >= -tol)
        })
    }

    pub fn total_volume(&self) -> f64 {
        self.cell_volume.iter().sum()
    }

    /// Nodal value as the mean of per-element values over the one or two
    /// elements sharing the face.
    pub fn node_mean<T>(&self, per_tet: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        self.face_tets
            .iter()
            .map(|&[a, b]| {
                if b == NONE {
                    per_tet[a]
                } else {
                    (per_tet[a] + per_tet[b]) * 0.5
                }
            })
            .collect()
    }
}
