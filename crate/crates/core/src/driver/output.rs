//! Legacy ASCII VTK snapshots and CSV reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::fields::FlowState;
use crate::mesh::{DualMesh, FeMesh};
use crate::verification::ErrorReport;

fn scalars(s: &mut String, name: &str, values: impl Iterator<Item = f64>) {
    let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
    for v in values {
        let _ = writeln!(s, "{v:.12e}");
    }
}

/// Point cloud of the finite volume nodes with every nodal unknown.
pub fn format_vtk_nodes(state: &FlowState, dual: &DualMesh) -> String {
    let n = dual.n_nodes();
    let mut s = String::from("# vtk DataFile Version 3.0\nfinite volume nodes\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {n} double");
    for p in &dual.nodes {
        let _ = writeln!(s, "{:.12e} {:.12e} {:.12e}", p.x, p.y, p.z);
    }
    let _ = writeln!(s, "CELLS {n} {}", 2 * n);
    for i in 0..n {
        let _ = writeln!(s, "1 {i}");
    }
    let _ = writeln!(s, "CELL_TYPES {n}");
    for _ in 0..n {
        s.push_str("1\n");
    }
    let _ = writeln!(s, "POINT_DATA {n}\nVECTORS momentum double");
    for w in &state.w_u {
        let _ = writeln!(s, "{:.12e} {:.12e} {:.12e}", w.x, w.y, w.z);
    }
    let pi = &state.pi;
    scalars(
        &mut s,
        "pressure",
        dual.face_vertices.iter().map(|f| (pi[f[0]] + pi[f[1]] + pi[f[2]]) / 3.0),
    );
    scalars(&mut s, "k", state.w_k.iter().copied());
    scalars(&mut s, "eps", state.w_eps.iter().copied());
    for (m, y) in state.w_y.iter().enumerate() {
        scalars(&mut s, &format!("y{m}"), y.iter().copied());
    }
    scalars(&mut s, "mu_t", state.mu_t.iter().copied());
    s
}

/// Tetrahedral mesh with the vertex pressure.
pub fn format_vtk_mesh(pi: &[f64], fe: &FeMesh) -> String {
    let nv = fe.vertices.len();
    let nt = fe.tets.len();
    let mut s = String::from("# vtk DataFile Version 3.0\nfinite element mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {nv} double");
    for p in &fe.vertices {
        let _ = writeln!(s, "{:.12e} {:.12e} {:.12e}", p.x, p.y, p.z);
    }
    let _ = writeln!(s, "CELLS {nt} {}", 5 * nt);
    for t in &fe.tets {
        let _ = writeln!(s, "4 {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("10\n");
    }
    let _ = writeln!(s, "POINT_DATA {nv}");
    scalars(&mut s, "pressure", pi.iter().copied());
    s
}

/// Writes `<base>_nodes.vtk` and `<base>_mesh.vtk`.
pub fn write_vtk(state: &FlowState, dual: &DualMesh, fe: &FeMesh, base: &Path) -> Result<()> {
    let with = |suffix: &str| -> PathBuf {
        let mut name = base.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(suffix);
        base.with_file_name(name)
    };
    std::fs::write(with("_nodes.vtk"), format_vtk_nodes(state, dual))?;
    std::fs::write(with("_mesh.vtk"), format_vtk_mesh(&state.pi, fe))?;
    Ok(())
}

pub fn write_csv(report: &ErrorReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv())?;
    Ok(())
}
