//! Tetrahedral element mesh, its face-type dual mesh and mesh file I/O.

mod channel;
mod dual;
mod io;

pub use channel::{generate_channel_cylinder, ChannelCylinder, CYLINDER_TAG, INLET_TAG, OUTLET_TAG, WALL_TAG};
pub use dual::{DualMesh, Interface, NONE};
pub use io::{read_mesh, write_mesh};

use crate::error::{Error, Result};
use crate::geometry::{signed_tet_volume, Point};

/// Boundary tags used by the box generator, in the order x-, x+, y-, y+, z-, z+.
pub const BOX_TAGS: [i32; 6] = [1, 2, 3, 4, 5, 6];

#[derive(Debug, Clone, PartialEq)]
pub struct FeMesh {
    pub vertices: Vec<Point>,
    pub tets: Vec<[usize; 4]>,
    pub boundary_faces: Vec<([usize; 3], i32)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxExtents {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoxExtents {
    pub fn unit() -> Self {
        BoxExtents {
            min: [0.0; 3],
            max: [1.0; 3],
        }
    }

    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        BoxExtents { min, max }
    }
}

impl FeMesh {
    /// Builds a mesh from raw arrays, reorienting tets to positive volume.
    pub fn new(
        vertices: Vec<Point>,
        mut tets: Vec<[usize; 4]>,
        boundary_faces: Vec<([usize; 3], i32)>,
    ) -> Result<Self> {
        let nv = vertices.len();
        for (t, tet) in tets.iter_mut().enumerate() {
            if tet.iter().any(|&v| v >= nv) {
                return Err(Error::Topology(format!(
                    "element {t} references a vertex outside 0..{nv}"
                )));
            }
            let vol = signed_tet_volume(
                &vertices[tet[0]],
                &vertices[tet[1]],
                &vertices[tet[2]],
                &vertices[tet[3]],
            );
            if vol == 0.0 || !vol.is_finite() {
                return Err(Error::SingularGeometry(format!(
                    "element {t} has zero volume"
                )));
            }
            if vol < 0.0 {
                tet.swap(2, 3);
            }
        }
        for (f, (face, _)) in boundary_faces.iter().enumerate() {
            if face.iter().any(|&v| v >= nv) {
                return Err(Error::Topology(format!(
                    "boundary face {f} references a vertex outside 0..{nv}"
                )));
            }
        }
        Ok(FeMesh {
            vertices,
            tets,
            boundary_faces,
        })
    }

    pub fn tet_points(&self, t: usize) -> [Point; 4] {
        let v = self.tets[t];
        [
            self.vertices[v[0]],
            self.vertices[v[1]],
            self.vertices[v[2]],
            self.vertices[v[3]],
        ]
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let p = self.tet_points(t);
        signed_tet_volume(&p[0], &p[1], &p[2], &p[3])
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }
}

/// Uniform box mesh with `n` cubes per edge, each split into 6 tets.
pub fn generate_cube_mesh(n: usize, extents: BoxExtents) -> Result<FeMesh> {
    generate_box_mesh([n, n, n], extents)
}

/// Structured box mesh with `counts[a]` cubes along axis `a`.
///
/// Every cube is cut into six tetrahedra sharing its main diagonal, which
/// gives a conforming mesh because neighbouring cubes agree on face diagonals.
pub fn generate_box_mesh(counts: [usize; 3], extents: BoxExtents) -> Result<FeMesh> {
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidArgument(
            "box mesh needs at least one subdivision per axis".into(),
        ));
    }
    for a in 0..3 {
        if !(extents.max[a] > extents.min[a]) {
            return Err(Error::InvalidArgument(format!(
                "degenerate box extent along axis {a}"
            )));
        }
    }
    let [nx, ny, nz] = counts;
    let id = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                let f = [i as f64 / nx as f64, j as f64 / ny as f64, k as f64 / nz as f64];
                vertices.push(Point::new(
                    extents.min[0] + f[0] * (extents.max[0] - extents.min[0]),
                    extents.min[1] + f[1] * (extents.max[1] - extents.min[1]),
                    extents.min[2] + f[2] * (extents.max[2] - extents.min[2]),
                ));
            }
        }
    }
    // corner c of a cube has offsets (c & 1, (c >> 1) & 1, (c >> 2) & 1)
    const PATHS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(6 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let corner = |c: usize| id(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                for p in PATHS {
                    let c1 = 1 << p[0];
                    let c2 = c1 | (1 << p[1]);
                    tets.push([corner(0), corner(c1), corner(c2), corner(7)]);
                }
            }
        }
    }
    let mut boundary_faces = Vec::new();
    // each boundary quad is split along the diagonal through its lowest-offset
    // corner and its opposite corner, matching the interior split
    let mut quad = |a: [usize; 4], tag: i32| {
        // a = [lo, lo+e1, lo+e2, lo+e1+e2]
        boundary_faces.push(([a[0], a[1], a[3]], tag));
        boundary_faces.push(([a[0], a[2], a[3]], tag));
    };
    for k in 0..nz {
        for j in 0..ny {
            quad([id(0, j, k), id(0, j + 1, k), id(0, j, k + 1), id(0, j + 1, k + 1)], BOX_TAGS[0]);
            quad([id(nx, j, k), id(nx, j + 1, k), id(nx, j, k + 1), id(nx, j + 1, k + 1)], BOX_TAGS[1]);
        }
    }
    for k in 0..nz {
        for i in 0..nx {
            quad([id(i, 0, k), id(i + 1, 0, k), id(i, 0, k + 1), id(i + 1, 0, k + 1)], BOX_TAGS[2]);
            quad([id(i, ny, k), id(i + 1, ny, k), id(i, ny, k + 1), id(i + 1, ny, k + 1)], BOX_TAGS[3]);
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            quad([id(i, j, 0), id(i + 1, j, 0), id(i, j + 1, 0), id(i + 1, j + 1, 0)], BOX_TAGS[4]);
            quad([id(i, j, nz), id(i + 1, j, nz), id(i, j + 1, nz), id(i + 1, j + 1, nz)], BOX_TAGS[5]);
        }
    }
    FeMesh::new(vertices, tets, boundary_faces)
}
