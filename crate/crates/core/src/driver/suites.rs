//! Mesh-refinement studies of the manufactured and Gaussian cases.

use std::str::FromStr;

use super::config::{CaseConfig, CaseKind, MeshSource, GAUSSIAN_COUNTS};
use super::Simulation;
use crate::error::{Error, Result};
use crate::fields::Scheme;
use crate::geometry::Point;
use crate::verification::ErrorReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Mms1,
    Mms2,
    Gaussian,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mms1" => Ok(Suite::Mms1),
            "mms2" => Ok(Suite::Mms2),
            "gaussian" => Ok(Suite::Gaussian),
            _ => Err(Error::Config(format!("unknown suite {s:?} (expected mms1, mms2 or gaussian)"))),
        }
    }
}

impl Suite {
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            Suite::Mms1 => &["pi", "w_u"],
            Suite::Mms2 => &["pi", "w_u", "w_k", "w_eps", "w_y"],
            Suite::Gaussian => &["w_y"],
        }
    }

    /// Case configuration on refinement level `level` (0-based).
    pub fn config(self, scheme: Scheme, level: usize) -> CaseConfig {
        let kind = match self {
            Suite::Mms1 => CaseKind::Mms1,
            Suite::Mms2 => CaseKind::Mms2,
            Suite::Gaussian => CaseKind::Gaussian,
        };
        let mut c = CaseConfig::preset(kind);
        c.scheme.scheme = scheme;
        c.mesh = mesh_levels(self)[level].1.clone();
        if self == Suite::Gaussian && scheme != Scheme::Lader {
            c.scheme.cfl = 5.0;
        }
        c
    }
}

/// `(name, mesh, h)` for the three refinement levels.
pub fn mesh_levels(suite: Suite) -> Vec<(String, MeshSource, f64)> {
    match suite {
        Suite::Mms1 | Suite::Mms2 => [4usize, 8, 16]
            .iter()
            .enumerate()
            .map(|(l, &n)| {
                (
                    format!("M{}", l + 1),
                    MeshSource::Box {
                        counts: [n, n, n],
                        min: Point::zeros(),
                        max: Point::new(1.0, 1.0, 1.0),
                    },
                    1.0 / n as f64,
                )
            })
            .collect(),
        Suite::Gaussian => GAUSSIAN_COUNTS
            .iter()
            .enumerate()
            .map(|(l, &counts)| {
                (
                    format!("M{}", l + 1),
                    MeshSource::Box {
                        counts,
                        min: Point::new(-0.9, -0.9, -0.3),
                        max: Point::new(0.9, 0.9, 0.3),
                    },
                    1.8 / counts[0] as f64,
                )
            })
            .collect(),
    }
}

/// Runs the first `levels` meshes of the suite and collects the errors.
pub fn convergence_suite(
    suite: Suite,
    scheme: Scheme,
    levels: usize,
    mut progress: impl FnMut(&str, usize, f64),
) -> Result<ErrorReport> {
    let meshes = mesh_levels(suite);
    if levels == 0 || levels > meshes.len() {
        return Err(Error::InvalidArgument(format!("levels must be in 1..={}", meshes.len())));
    }
    let mut report = ErrorReport::new(suite.variables());
    for (l, (name, _, h)) in meshes.iter().enumerate().take(levels) {
        let mut sim = Simulation::new(suite.config(scheme, l))?;
        let clock = std::time::Instant::now();
        let rec = sim.run()?;
        progress(name, rec.steps(), clock.elapsed().as_secs_f64());
        let acc = rec.errors.unwrap_or_default();
        report.push(name, *h, &acc);
    }
    Ok(report)
}
