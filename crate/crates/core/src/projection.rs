//! P1 pressure-correction problem and the divergence-restoring update.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::mesh::{DualMesh, FeMesh};

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix { n, row_ptr, col, val }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for r in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            y[r] = s;
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        (self.row_ptr[r]..self.row_ptr[r + 1])
            .find(|&k| self.col[k] == c)
            .map_or(0.0, |k| self.val[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PressureSystem {
    pub stiffness: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Lumped vertex volumes defining the zero-mean constraint on the solution.
    pub mean_weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveInfo {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// `K_ab = sum_T |T| grad(phi_a).grad(phi_b)`.
pub fn assemble_stiffness(fe: &FeMesh, dual: &DualMesh) -> CsrMatrix {
    let mut t = Vec::with_capacity(16 * fe.tets.len());
    for (e, tet) in fe.tets.iter().enumerate() {
        let g = &dual.tet_basis_grad[e];
        let vol = dual.tet_volume[e];
        for a in 0..4 {
            for b in 0..4 {
                t.push((tet[a], tet[b], vol * g[a].dot(&g[b])));
            }
        }
    }
    CsrMatrix::from_triplets(fe.vertices.len(), t)
}

/// `b_a = (1/dt) [sum_T |T| W_T.grad(phi_a) - int G phi_a]`, where `g_normal`
/// holds the normal momentum flux per unit area on every boundary node
/// (ignored on interior nodes).
pub fn projection_rhs(fe: &FeMesh, dual: &DualMesh, w_tets: &[Vec3], dt: f64, g_normal: &[f64]) -> Vec<f64> {
    let mut b = weak_divergence(fe, dual, w_tets, g_normal);
    for x in b.iter_mut() {
        *x /= dt;
    }
    b
}

/// `int W.grad(phi_a) - int_boundary G phi_a` for every vertex.
pub fn weak_divergence(fe: &FeMesh, dual: &DualMesh, w_tets: &[Vec3], g_normal: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; fe.vertices.len()];
    for (e, tet) in fe.tets.iter().enumerate() {
        let g = &dual.tet_basis_grad[e];
        let vol = dual.tet_volume[e];
        for a in 0..4 {
            b[tet[a]] += vol * w_tets[e].dot(&g[a]);
        }
    }
    for i in 0..dual.n_nodes() {
        if !dual.is_boundary(i) {
            continue;
        }
        let share = g_normal[i] * dual.boundary_normal[i].norm() / 3.0;
        for &v in &dual.face_vertices[i] {
            b[v] -= share;
        }
    }
    b
}

pub fn assemble_pressure_system(
    fe: &FeMesh,
    dual: &DualMesh,
    stiffness: &CsrMatrix,
    w_tets: &[Vec3],
    dt: f64,
    g_normal: &[f64],
) -> PressureSystem {
    PressureSystem {
        stiffness: stiffness.clone(),
        rhs: projection_rhs(fe, dual, w_tets, dt, g_normal),
        mean_weights: dual.vertex_volume.clone(),
    }
}

fn remove_mean(x: &mut [f64]) {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= m;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients on the pure Neumann problem.
/// The constant mode is projected out of the right-hand side and of every
/// preconditioned residual; the result is shifted to zero weighted mean.
pub fn solve_pressure(sys: &PressureSystem, tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveInfo)> {
    let k = &sys.stiffness;
    let n = k.n;
    if sys.rhs.len() != n {
        return Err(Error::Size {
            what: "pressure rhs",
            expected: n,
            actual: sys.rhs.len(),
        });
    }
    let mut b = sys.rhs.clone();
    remove_mean(&mut b);
    let bnorm = dot(&b, &b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((
            x,
            SolveInfo {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let inv_diag: Vec<f64> = k
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b;
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    remove_mean(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut history = Vec::new();
    for it in 1..=max_iter {
        k.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Solver {
                iterations: it,
                last: history.last().copied().unwrap_or(1.0),
                history,
            });
        }
        let a = rz / pap;
        for q in 0..n {
            x[q] += a * p[q];
            r[q] -= a * ap[q];
        }
        let rel = dot(&r, &r).sqrt() / bnorm;
        history.push(rel);
        if rel <= tol {
            let wsum: f64 = sys.mean_weights.iter().sum();
            let m = dot(&x, &sys.mean_weights) / wsum;
            for v in x.iter_mut() {
                *v -= m;
            }
            return Ok((
                x,
                SolveInfo {
                    iterations: it,
                    relative_residual: rel,
                },
            ));
        }
        for q in 0..n {
            z[q] = r[q] * inv_diag[q];
        }
        remove_mean(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for q in 0..n {
            p[q] = z[q] + beta * p[q];
        }
    }
    Err(Error::Solver {
        iterations: max_iter,
        last: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}

/// Element gradients of a vertex field.
pub fn element_gradients(fe: &FeMesh, dual: &DualMesh, field: &[f64]) -> Vec<Vec3> {
    (0..fe.tets.len())
        .map(|t| dual.vertex_field_gradient(fe, t, field))
        .collect()
}

/// `W^{n+1}_i = W~_i - dt grad(delta)_i` with the nodal gradient averaged
/// over the elements sharing the face.
pub fn post_projection_momentum(w_tilde: &[Vec3], delta: &[f64], fe: &FeMesh, dual: &DualMesh, dt: f64) -> Vec<Vec3> {
    let node_grad = dual.node_mean(&element_gradients(fe, dual, delta));
    w_tilde
        .iter()
        .zip(&node_grad)
        .map(|(w, g)| w - dt * g)
        .collect()
}

/// Element momenta after the correction, `W~_T - dt grad(delta)_T`; these
/// satisfy the discrete weak divergence constraint.
pub fn corrected_tet_momentum(w_tets: &[Vec3], delta: &[f64], fe: &FeMesh, dual: &DualMesh, dt: f64) -> Vec<Vec3> {
    element_gradients(fe, dual, delta)
        .iter()
        .zip(w_tets)
        .map(|(g, w)| w - dt * g)
        .collect()
}
