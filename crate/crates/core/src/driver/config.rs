//! Flat `key = value` case files with dotted keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::{AlphaMode, SchemeConfig};
use crate::geometry::{Point, Vec3};
use crate::mesh::ChannelCylinder;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Mms1,
    Mms2,
    Gaussian,
    Cylinder,
    /// Uniform initial fields, boundary data from the `init.*` values.
    Uniform,
}

impl FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mms1" => CaseKind::Mms1,
            "mms2" => CaseKind::Mms2,
            "gaussian" => CaseKind::Gaussian,
            "cylinder" => CaseKind::Cylinder,
            "uniform" => CaseKind::Uniform,
            other => return Err(Error::Config(format!("unknown case {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Prescribed normal momentum, tangential part left free.
    DirichletInviscid,
    /// Prescribed momentum vector.
    DirichletViscous,
    /// Outflow: values extrapolated from the interior.
    Neumann,
    /// Every unknown set to the exact solution.
    ExactMms,
}

impl FromStr for BoundaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dirichlet-inviscid" => BoundaryKind::DirichletInviscid,
            "dirichlet-viscous" => BoundaryKind::DirichletViscous,
            "neumann" => BoundaryKind::Neumann,
            "exact-mms" => BoundaryKind::ExactMms,
            other => return Err(Error::Config(format!("unknown boundary condition {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Box { counts: [usize; 3], min: Point, max: Point },
    Channel(ChannelCylinder),
    File(PathBuf),
}

/// Uniform values used to initialise physical cases and for inflow data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialValues {
    pub u: Vec3,
    pub k: f64,
    pub eps: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub case: CaseKind,
    pub mesh: MeshSource,
    pub scheme: SchemeConfig,
    pub t_end: f64,
    pub max_steps: Option<u64>,
    pub bcs: BTreeMap<i32, BoundaryKind>,
    pub output_dir: Option<PathBuf>,
    pub output_every: u64,
    pub steady_threshold: Option<f64>,
    pub init: InitialValues,
    /// Peak inflow speed of the channel case.
    pub inflow_u: f64,
}

/// Cube counts of the three Gaussian meshes.
pub const GAUSSIAN_COUNTS: [[usize; 3]; 3] = [[18, 18, 6], [21, 21, 7], [30, 30, 10]];

impl CaseConfig {
    /// Defaults of every case before file overrides.
    pub fn preset(case: CaseKind) -> Self {
        let unit = MeshSource::Box {
            counts: [8, 8, 8],
            min: Point::zeros(),
            max: Point::new(1.0, 1.0, 1.0),
        };
        let mut scheme = SchemeConfig::default();
        let mut c = CaseConfig {
            case,
            mesh: unit,
            scheme: scheme.clone(),
            t_end: 1.0,
            max_steps: None,
            bcs: BTreeMap::new(),
            output_dir: None,
            output_every: 100,
            steady_threshold: None,
            init: InitialValues {
                u: Vec3::zeros(),
                k: 0.0,
                eps: 0.0,
                y: 0.0,
            },
            inflow_u: 0.45,
        };
        let all_exact = || (1..=6).map(|t| (t, BoundaryKind::ExactMms)).collect();
        match case {
            CaseKind::Mms1 => {
                scheme.mu = 1e-2;
                scheme.cfl = 1.0;
                c.bcs = all_exact();
            }
            CaseKind::Mms2 => {
                scheme.mu = 1e-2;
                scheme.diffusivity = 1e-3;
                scheme.cfl = 10.0;
                scheme.turbulence = true;
                scheme.n_species = 1;
                c.bcs = all_exact();
            }
            CaseKind::Gaussian => {
                scheme.mu = 1e-2;
                scheme.diffusivity = 1e-2;
                scheme.cfl = 0.5;
                scheme.n_species = 1;
                c.t_end = 2.0 * std::f64::consts::PI;
                c.mesh = MeshSource::Box {
                    counts: GAUSSIAN_COUNTS[0],
                    min: Point::new(-0.9, -0.9, -0.3),
                    max: Point::new(0.9, 0.9, 0.3),
                };
                c.bcs = all_exact();
            }
            CaseKind::Cylinder => {
                scheme.mu = 1e-3;
                scheme.cfl = 1.0;
                c.mesh = MeshSource::Channel(ChannelCylinder::default());
                c.t_end = 1e3;
                c.steady_threshold = Some(1e-3);
                c.bcs = [
                    (1, BoundaryKind::DirichletViscous),
                    (2, BoundaryKind::Neumann),
                    (3, BoundaryKind::DirichletViscous),
                    (4, BoundaryKind::DirichletViscous),
                ]
                .into_iter()
                .collect();
            }
            CaseKind::Uniform => {
                c.bcs = (1..=6).map(|t| (t, BoundaryKind::DirichletViscous)).collect();
            }
        }
        c.scheme = scheme;
        c
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut c = Self::parse(&text)?;
        if let MeshSource::File(p) = &c.mesh {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    c.mesh = MeshSource::File(dir.join(p));
                }
            }
        }
        Ok(c)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: n + 1,
                message: format!("expected `key = value`, found {line:?}"),
            })?;
            entries.push((n + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let case = match entries.iter().find(|(_, k, _)| k == "case") {
            Some((line, _, v)) => v.parse().map_err(|e: Error| Error::Parse {
                line: *line,
                message: e.to_string(),
            })?,
            None => CaseKind::Uniform,
        };
        let mut c = Self::preset(case);
        for (line, k, v) in &entries {
            c.apply(k, v).map_err(|e| Error::Parse {
                line: *line,
                message: e.to_string(),
            })?;
        }
        c.validate()?;
        Ok(c)
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        let s = &mut self.scheme;
        match key {
            "case" => {}
            "scheme" => s.scheme = v.parse()?,
            "alpha" => {
                s.alpha_mode = match v {
                    "coupled" => AlphaMode::Coupled,
                    "decoupled" => AlphaMode::Decoupled,
                    _ => return Err(Error::Config(format!("unknown alpha mode {v:?}"))),
                }
            }
            "lader.flux_diffusion" => s.lader_flux_diffusion = num(v)?,
            "physics.rho" => s.rho = num(v)?,
            "physics.mu" => s.mu = num(v)?,
            "physics.diffusivity" => s.diffusivity = num(v)?,
            "physics.turbulence" => s.turbulence = num(v)?,
            "physics.species" => s.n_species = num(v)?,
            "turbulence.c_mu" => s.coeffs.c_mu = num(v)?,
            "turbulence.c1_eps" => s.coeffs.c1_eps = num(v)?,
            "turbulence.c2_eps" => s.coeffs.c2_eps = num(v)?,
            "turbulence.sigma_k" => s.coeffs.sigma_k = num(v)?,
            "turbulence.sigma_eps" => s.coeffs.sigma_eps = num(v)?,
            "turbulence.sc_t" => s.coeffs.sc_t = num(v)?,
            "floors.k" => s.k_floor = num(v)?,
            "floors.eps" => s.eps_floor = num(v)?,
            "time.cfl" => s.cfl = num(v)?,
            "time.t_end" => self.t_end = num(v)?,
            "time.max_steps" => self.max_steps = Some(num(v)?),
            "solver.tol" => s.solver_tol = num(v)?,
            "solver.max_iter" => s.solver_max_iter = num(v)?,
            "mesh.n" => {
                let n: usize = num(v)?;
                self.set_box(|c, _, _| *c = [n, n, n]);
            }
            "mesh.counts" => {
                let a = triple::<usize>(v)?;
                self.set_box(|c, _, _| *c = a);
            }
            "mesh.min" => {
                let a = triple::<f64>(v)?;
                self.set_box(|_, lo, _| *lo = Point::from(a));
            }
            "mesh.max" => {
                let a = triple::<f64>(v)?;
                self.set_box(|_, _, hi| *hi = Point::from(a));
            }
            "mesh.gaussian" => {
                let l: usize = num(v)?;
                if !(1..=3).contains(&l) {
                    return Err(Error::Config("mesh.gaussian must be 1, 2 or 3".into()));
                }
                self.mesh = MeshSource::Box {
                    counts: GAUSSIAN_COUNTS[l - 1],
                    min: Point::new(-0.9, -0.9, -0.3),
                    max: Point::new(0.9, 0.9, 0.3),
                };
            }
            "mesh.file" => self.mesh = MeshSource::File(PathBuf::from(v)),
            "mesh.channel" => {
                if num::<bool>(v)? {
                    self.mesh = MeshSource::Channel(ChannelCylinder::default());
                }
            }
            "init.u" => self.init.u = Vec3::from(triple::<f64>(v)?),
            "init.k" => self.init.k = num(v)?,
            "init.eps" => self.init.eps = num(v)?,
            "init.y" => self.init.y = num(v)?,
            "inflow.u" => self.inflow_u = num(v)?,
            "output.dir" => self.output_dir = Some(PathBuf::from(v)),
            "output.every" => self.output_every = num(v)?,
            "steady.threshold" => self.steady_threshold = Some(num(v)?),
            _ => {
                if let Some(tag) = key.strip_prefix("bc.") {
                    let tag: i32 = num(tag)?;
                    self.bcs.insert(tag, v.parse()?);
                } else if let Some(field) = key.strip_prefix("channel.") {
                    let MeshSource::Channel(ch) = &mut self.mesh else {
                        return Err(Error::Config(format!("{key} needs a channel mesh")));
                    };
                    match field {
                        "n_side" => ch.n_side = num(v)?,
                        "n_radial" => ch.n_radial = num(v)?,
                        "n_upstream" => ch.n_upstream = num(v)?,
                        "n_downstream" => ch.n_downstream = num(v)?,
                        "n_depth" => ch.n_depth = num(v)?,
                        _ => return Err(Error::Config(format!("unknown key {key:?}"))),
                    }
                } else {
                    return Err(Error::Config(format!("unknown key {key:?}")));
                }
            }
        }
        Ok(())
    }

    fn set_box(&mut self, f: impl FnOnce(&mut [usize; 3], &mut Point, &mut Point)) {
        if !matches!(self.mesh, MeshSource::Box { .. }) {
            self.mesh = MeshSource::Box {
                counts: [8, 8, 8],
                min: Point::zeros(),
                max: Point::new(1.0, 1.0, 1.0),
            };
        }
        if let MeshSource::Box { counts, min, max } = &mut self.mesh {
            f(counts, min, max);
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if !(self.t_end >= 0.0) {
            return Err(Error::Config("t_end must be non-negative".into()));
        }
        if self.output_every == 0 {
            return Err(Error::Config("output.every must be positive".into()));
        }
        let exact_case = matches!(self.case, CaseKind::Mms1 | CaseKind::Mms2 | CaseKind::Gaussian);
        if !exact_case && self.bcs.values().any(|b| *b == BoundaryKind::ExactMms) {
            return Err(Error::Config("exact-mms boundaries need a manufactured case".into()));
        }
        if self.case == CaseKind::Mms2 && !(self.scheme.turbulence && self.scheme.n_species >= 1) {
            return Err(Error::Config("mms2 needs turbulence and one species".into()));
        }
        if self.case == CaseKind::Gaussian && self.scheme.n_species < 1 {
            return Err(Error::Config("gaussian needs one species".into()));
        }
        if self.scheme.turbulence && self.case == CaseKind::Uniform && !(self.init.k > 0.0 && self.init.eps > 0.0) {
            return Err(Error::Config("turbulent runs need positive init.k and init.eps".into()));
        }
        Ok(())
    }
}

fn num<T: FromStr>(v: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::Config(format!("cannot parse {v:?}")))
}

fn triple<T: FromStr + Copy>(v: &str) -> Result<[T; 3]> {
    let parts: Vec<T> = v
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(num)
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(Error::Config(format!("expected three values, found {v:?}"))),
    }
}
