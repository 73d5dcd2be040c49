//! Channel with a circular cylinder, built from a 2D block mesh around the
//! cylinder extruded across the channel depth.

use std::collections::HashMap;

use super::FeMesh;
use crate::error::{Error, Result};
use crate::geometry::Point;

pub const INLET_TAG: i32 = 1;
pub const OUTLET_TAG: i32 = 2;
pub const WALL_TAG: i32 = 3;
pub const CYLINDER_TAG: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCylinder {
    pub length: f64,
    pub height: f64,
    pub center: [f64; 2],
    pub radius: f64,
    /// Half-width of the square block around the cylinder, along x.
    pub block_half_width: f64,
    /// Segments on each side of the block (so 4x this around the cylinder).
    pub n_side: usize,
    pub n_radial: usize,
    pub n_upstream: usize,
    pub n_downstream: usize,
    pub n_depth: usize,
    /// Ratio between consecutive radial spacings.
    pub radial_growth: f64,
    /// Ratio between consecutive downstream spacings.
    pub downstream_growth: f64,
}

impl Default for ChannelCylinder {
    fn default() -> Self {
        ChannelCylinder {
            length: 2.5,
            height: 0.41,
            center: [0.5, 0.2],
            radius: 0.05,
            block_half_width: 0.2,
            n_side: 12,
            n_radial: 7,
            n_upstream: 6,
            n_downstream: 24,
            n_depth: 6,
            radial_growth: 1.25,
            downstream_growth: 1.06,
        }
    }
}

fn graded(n: usize, ratio: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|k| ratio.powi(k as i32)).collect();
    let s: f64 = w.iter().sum();
    let mut acc = 0.0;
    let mut out = vec![0.0];
    for x in w.iter_mut() {
        acc += *x / s;
        out.push(acc);
    }
    *out.last_mut().unwrap() = 1.0;
    out
}

struct Planar {
    pts: Vec<[f64; 2]>,
    index: HashMap<(i64, i64), usize>,
    tris: Vec<[usize; 3]>,
}

impl Planar {
    fn node(&mut self, p: [f64; 2]) -> usize {
        let key = ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64);
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.pts.push(p);
        self.index.insert(key, self.pts.len() - 1);
        self.pts.len() - 1
    }

    fn quad(&mut self, a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) {
        // corners in cyclic order; cut along the shorter diagonal
        let (ia, ib, ic, id) = (self.node(a), self.node(b), self.node(c), self.node(d));
        let d1 = (a[0] - c[0]).hypot(a[1] - c[1]);
        let d2 = (b[0] - d[0]).hypot(b[1] - d[1]);
        if d1 <= d2 {
            self.tris.push([ia, ib, ic]);
            self.tris.push([ia, ic, id]);
        } else {
            self.tris.push([ia, ib, id]);
            self.tris.push([ib, ic, id]);
        }
    }
}

pub fn generate_channel_cylinder(c: &ChannelCylinder) -> Result<FeMesh> {
    let [cx, cy] = c.center;
    let x0 = cx - c.block_half_width;
    let x1 = cx + c.block_half_width;
    if c.n_side == 0 || c.n_radial == 0 || c.n_upstream == 0 || c.n_downstream == 0 || c.n_depth == 0 {
        return Err(Error::InvalidArgument("channel mesh counts must be positive".into()));
    }
    if !(x0 > 0.0 && x1 < c.length && cy - c.radius > 0.0 && cy + c.radius < c.height)
        || c.radius >= c.block_half_width
    {
        return Err(Error::InvalidArgument("cylinder does not fit inside its block".into()));
    }
    let mut pl = Planar {
        pts: Vec::new(),
        index: HashMap::new(),
        tris: Vec::new(),
    };
    let ns = c.n_side;
    let ys: Vec<f64> = (0..=ns).map(|k| c.height * k as f64 / ns as f64).collect();
    let xs_block: Vec<f64> = (0..=ns).map(|k| x0 + (x1 - x0) * k as f64 / ns as f64).collect();

    // block perimeter, counter-clockwise from the lower-left corner
    let mut perim: Vec<[f64; 2]> = Vec::with_capacity(4 * ns);
    for k in 0..ns {
        perim.push([xs_block[k], 0.0]);
    }
    for k in 0..ns {
        perim.push([x1, ys[k]]);
    }
    for k in 0..ns {
        perim.push([xs_block[ns - k], c.height]);
    }
    for k in 0..ns {
        perim.push([x0, ys[ns - k]]);
    }
    let radial = graded(c.n_radial, c.radial_growth);
    let ray = |p: [f64; 2], s: f64| {
        let a = (p[1] - cy).atan2(p[0] - cx);
        let q = [cx + c.radius * a.cos(), cy + c.radius * a.sin()];
        [q[0] + s * (p[0] - q[0]), q[1] + s * (p[1] - q[1])]
    };
    let np = perim.len();
    for k in 0..np {
        let p = perim[k];
        let q = perim[(k + 1) % np];
        for r in 0..c.n_radial {
            pl.quad(ray(p, radial[r]), ray(q, radial[r]), ray(q, radial[r + 1]), ray(p, radial[r + 1]));
        }
    }

    let xs_up: Vec<f64> = (0..=c.n_upstream)
        .map(|k| x0 * k as f64 / c.n_upstream as f64)
        .collect();
    let xs_down: Vec<f64> = graded(c.n_downstream, c.downstream_growth)
        .iter()
        .map(|s| x1 + s * (c.length - x1))
        .collect();
    for xs in [&xs_up, &xs_down] {
        for i in 0..xs.len() - 1 {
            for j in 0..ns {
                pl.quad([xs[i], ys[j]], [xs[i + 1], ys[j]], [xs[i + 1], ys[j + 1]], [xs[i], ys[j + 1]]);
            }
        }
    }

    let n2 = pl.pts.len();
    let nz = c.n_depth;
    let mut vertices = Vec::with_capacity(n2 * (nz + 1));
    for k in 0..=nz {
        let z = c.height * k as f64 / nz as f64;
        for p in &pl.pts {
            vertices.push(Point::new(p[0], p[1], z));
        }
    }
    let v = |node: usize, layer: usize| node + layer * n2;

    let mut tets = Vec::with_capacity(3 * nz * pl.tris.len());
    for k in 0..nz {
        for t in &pl.tris {
            let mut s = *t;
            s.sort_unstable();
            let [a, b, cc] = s;
            // quad side faces are cut from the lower-index bottom node to the
            // higher-index top node, which keeps neighbouring prisms conforming
            tets.push([v(a, k), v(b, k), v(cc, k), v(cc, k + 1)]);
            tets.push([v(a, k), v(b, k), v(b, k + 1), v(cc, k + 1)]);
            tets.push([v(a, k), v(a, k + 1), v(b, k + 1), v(cc, k + 1)]);
        }
    }

    let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &pl.tris {
        for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = (e.0.min(e.1), e.0.max(e.1));
            *edge_count.entry(key).or_insert(0) += 1;
        }
    }
    let tol = 1e-9;
    let mut boundary_faces = Vec::new();
    let mut edges: Vec<(usize, usize)> = edge_count
        .into_iter()
        .filter(|&(_, n)| n == 1)
        .map(|(e, _)| e)
        .collect();
    edges.sort_unstable();
    for (p, q) in edges {
        let (a, b) = (pl.pts[p], pl.pts[q]);
        let tag = if a[0].abs() < tol && b[0].abs() < tol {
            INLET_TAG
        } else if (a[0] - c.length).abs() < tol && (b[0] - c.length).abs() < tol {
            OUTLET_TAG
        } else if (a[1].abs() < tol && b[1].abs() < tol)
            || ((a[1] - c.height).abs() < tol && (b[1] - c.height).abs() < tol)
        {
            WALL_TAG
        } else {
            CYLINDER_TAG
        };
        for k in 0..nz {
            boundary_faces.push(([v(p, k), v(q, k), v(q, k + 1)], tag));
            boundary_faces.push(([v(p, k), v(p, k + 1), v(q, k + 1)], tag));
        }
    }
    for t in &pl.tris {
        boundary_faces.push(([v(t[0], 0), v(t[1], 0), v(t[2], 0)], WALL_TAG));
        boundary_faces.push(([v(t[0], nz), v(t[1], nz), v(t[2], nz)], WALL_TAG));
    }
    FeMesh::new(vertices, tets, boundary_faces)
}
