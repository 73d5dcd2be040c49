use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::FeMesh;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Reads the ASCII mesh format: a `nv nt nbf` header, `nv` vertex lines,
/// `nt` element lines and `nbf` boundary face lines `v0 v1 v2 tag`.
pub fn read_mesh(path: impl AsRef<Path>) -> Result<FeMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

pub fn parse_mesh(text: &str) -> Result<FeMesh> {
    let mut lines = text.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            None
        } else {
            Some((n + 1, l))
        }
    });
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("unexpected end of file while reading {what}"),
        })
    };
    let (ln, header) = next("header")?;
    let h: [usize; 3] = fields(header, ln)?;
    let [nv, nt, nbf] = h;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = next("vertices")?;
        let c: [f64; 3] = fields(l, ln)?;
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse {
                line: ln,
                message: "non-finite coordinate".into(),
            });
        }
        vertices.push(Point::new(c[0], c[1], c[2]));
    }
    let mut tets = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = next("elements")?;
        let t: [usize; 4] = fields(l, ln)?;
        check_range(&t, nv, ln)?;
        tets.push(t);
    }
    let mut boundary = Vec::with_capacity(nbf);
    for _ in 0..nbf {
        let (ln, l) = next("boundary faces")?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected 4 fields, found {}", parts.len()),
            });
        }
        let f: [usize; 3] = fields(&parts[..3].join(" "), ln)?;
        check_range(&f, nv, ln)?;
        let tag = parse_one::<i32>(parts[3], ln)?;
        boundary.push((f, tag));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            message: "trailing data after the declared counts".into(),
        });
    }
    FeMesh::new(vertices, tets, boundary)
}

fn parse_one<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {s:?}"),
    })
}

fn fields<T: FromStr + Copy + Default, const N: usize>(l: &str, line: usize) -> Result<[T; N]> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.len() != N {
        return Err(Error::Parse {
            line,
            message: format!("expected {N} fields, found {}", parts.len()),
        });
    }
    let mut out = [T::default(); N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_one(p, line)?;
    }
    Ok(out)
}

fn check_range(idx: &[usize], nv: usize, line: usize) -> Result<()> {
    match idx.iter().find(|&&v| v >= nv) {
        Some(v) => Err(Error::Parse {
            line,
            message: format!("vertex index {v} out of range (nv = {nv})"),
        }),
        None => Ok(()),
    }
}

pub fn format_mesh(mesh: &FeMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} {}",
        mesh.vertices.len(),
        mesh.tets.len(),
        mesh.boundary_faces.len()
    );
    for v in &mesh.vertices {
        let _ = writeln!(s, "{:e} {:e} {:e}", v.x, v.y, v.z);
    }
    for t in &mesh.tets {
        let _ = writeln!(s, "{} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    for (f, tag) in &mesh.boundary_faces {
        let _ = writeln!(s, "{} {} {} {}", f[0], f[1], f[2], tag);
    }
    s
}

pub fn write_mesh(mesh: &FeMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_mesh(mesh))?;
    Ok(())
}
