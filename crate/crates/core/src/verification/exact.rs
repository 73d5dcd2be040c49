//! Exact solutions and their manufactured source terms.

use std::f64::consts::PI;

use crate::fields::TurbulenceCoeffs;
use crate::geometry::{Point, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExactFields {
    pub pi: f64,
    pub u: Vec3,
    pub k: f64,
    pub eps: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sources {
    pub f_u: Vec3,
    pub f_k: f64,
    pub f_eps: f64,
    pub f_y: f64,
}

pub trait ExactSolution: Send + Sync {
    fn fields(&self, p: &Point, t: f64) -> ExactFields;
    fn sources(&self, p: &Point, t: f64) -> Sources;
}

/// Laminar manufactured flow in the unit cube.
#[derive(Debug, Clone, Copy)]
pub struct MmsLaminar {
    pub mu: f64,
}

impl Default for MmsLaminar {
    fn default() -> Self {
        MmsLaminar { mu: 1e-2 }
    }
}

fn laminar_fields(p: &Point, t: f64) -> ExactFields {
    let (x, y, z) = (p.x, p.y, p.z);
    ExactFields {
        pi: (PI * t * (x + y + z)).cos(),
        u: Vec3::new(
            (PI * y * t).sin() * (PI * z * t).cos(),
            -(PI * z.powi(3) * t).cos(),
            (-2.0 * PI * x * t * t).exp(),
        ),
        k: 0.0,
        eps: 0.0,
        y: 0.0,
    }
}

impl ExactSolution for MmsLaminar {
    fn fields(&self, p: &Point, t: f64) -> ExactFields {
        laminar_fields(p, t)
    }

    fn sources(&self, p: &Point, t: f64) -> Sources {
        Sources {
            f_u: mms_laminar(p, t, self.mu).1,
            ..Default::default()
        }
    }
}

/// Exact fields and momentum source of the laminar manufactured flow.
pub fn mms_laminar(p: &Point, t: f64, mu: f64) -> (ExactFields, Vec3) {
    let (x, y, z) = (p.x, p.y, p.z);
    let pi2 = PI * PI;
    let (sy, cy) = (PI * t * y).sin_cos();
    let (sz, cz) = (PI * t * z).sin_cos();
    let (sz3, cz3) = (PI * t * z.powi(3)).sin_cos();
    let ss = (PI * t * (x + y + z)).sin();
    let e2 = (-2.0 * PI * t * t * x).exp();
    let f1 = PI * y * cy * cz - PI * t * ss - PI * z * sy * sz + 2.0 * pi2 * t * t * mu * sy * cz
        - PI * t * cz3 * cy * cz
        - PI * t * sy * sz * e2;
    let f2 = PI * z.powi(3) * sz3 - PI * t * ss - 6.0 * PI * t * z * mu * sz3
        - 9.0 * pi2 * t * t * z.powi(4) * mu * cz3
        + 3.0 * PI * t * z * z * e2 * sz3;
    let f3 = -PI * t * ss - 4.0 * pi2 * t.powi(4) * mu * e2 - 4.0 * PI * t * x * e2 - 2.0 * PI * t * t * sy * e2 * cz;
    (laminar_fields(p, t), Vec3::new(f1, f2, f3))
}

/// Turbulent manufactured flow with one species.
#[derive(Debug, Clone, Copy)]
pub struct MmsTurbulent {
    pub mu: f64,
    pub diffusivity: f64,
    pub coeffs: TurbulenceCoeffs,
}

impl Default for MmsTurbulent {
    fn default() -> Self {
        MmsTurbulent {
            mu: 1e-2,
            diffusivity: 1e-3,
            coeffs: TurbulenceCoeffs::default(),
        }
    }
}

impl ExactSolution for MmsTurbulent {
    fn fields(&self, p: &Point, t: f64) -> ExactFields {
        mms_turbulent(p, t, self).0
    }

    fn sources(&self, p: &Point, t: f64) -> Sources {
        mms_turbulent(p, t, self).1
    }
}

/// Exact fields and all source terms of the turbulent manufactured flow.
pub fn mms_turbulent(p: &Point, t: f64, m: &MmsTurbulent) -> (ExactFields, Sources) {
    let (x, y, z) = (p.x, p.y, p.z);
    let (mu, d) = (m.mu, m.diffusivity);
    let TurbulenceCoeffs {
        c_mu,
        c1_eps,
        c2_eps,
        sigma_k,
        sigma_eps,
        sc_t,
    } = m.coeffs;
    let pi2 = PI * PI;
    let (sx, cx) = (PI * t * x).sin_cos();
    let (sy, cy) = (PI * t * y).sin_cos();
    let (sz, cz) = (PI * t * z).sin_cos();
    let (sz3, cz3) = (PI * t * z.powi(3)).sin_cos();
    let ss = (PI * t * (x + y + z)).sin();
    let e2 = (-2.0 * PI * t * t * x).exp();
    let ez = (-PI * t * z).exp();
    let k2 = (sx + 2.0) * (sx + 2.0);
    let ep = ez + 1.0;

    let f1 = 2.0 * PI * t * cx / 3.0 - PI * t * ss + PI * y * cy * cz - PI * z * sy * sz
        + 2.0 * pi2 * t * t * mu * sy * cz
        - PI * t * cz3 * cy * cz
        - PI * t * sy * sz * e2
        + 2.0 * pi2 * c_mu * t * t * sy * cz * k2 / ep
        + pi2 * c_mu * t * t * sy * sz * ez * k2 / (ep * ep);
    // the z^4 viscous term carries a minus sign, as in the laminar source
    let f2 = PI * z.powi(3) * sz3 - PI * t * ss - 6.0 * PI * t * z * mu * sz3
        - 9.0 * pi2 * t * t * z.powi(4) * mu * cz3
        + 3.0 * PI * t * z * z * e2 * sz3
        - 9.0 * pi2 * c_mu * t * t * z.powi(4) * cz3 * k2 / ep
        - 6.0 * PI * c_mu * t * z * sz3 * k2 / ep
        - 3.0 * pi2 * c_mu * t * t * z * z * ez * sz3 * k2 / (ep * ep);
    let f3 = 4.0 * pi2 * c_mu * t.powi(3) * e2 * cx * (sx + 2.0) / ep
        - 4.0 * pi2 * t.powi(4) * mu * e2
        - 4.0 * PI * t * x * e2
        - 2.0 * PI * t * t * sy * e2 * cz
        - 4.0 * pi2 * c_mu * t.powi(4) * e2 * k2 / ep
        - PI * t * ss;

    let s13 = 2.0 * PI * t * t * e2 + PI * t * sy * sz;
    let prod = c_mu * k2 * s13 * s13 / ep
        + 9.0 * pi2 * c_mu * t * t * z.powi(4) * sz3 * sz3 * k2 / ep
        + pi2 * c_mu * t * t * cy * cy * cz * cz * k2 / ep;
    let f_k = ez + PI * x * cx - prod + pi2 * t * t * mu * sx + PI * t * sy * cx * cz
        - 2.0 * pi2 * c_mu * t * t * cx * cx * (sx + 2.0) / (sigma_k * ep)
        + pi2 * c_mu * t * t * sx * k2 / (sigma_k * ep)
        + 1.0;
    let f_eps = c2_eps * ep * ep / (sx + 2.0) - PI * z * ez - pi2 * t * t * mu * ez - c1_eps * ep * prod / (sx + 2.0)
        - PI * t * ez * e2
        - pi2 * c_mu * t * t * ez * k2 / (sigma_eps * ep)
        + pi2 * c_mu * t * t * (-2.0 * PI * t * z).exp() * k2 / (sigma_eps * ep * ep);
    let f_y = PI * x * cx
        + pi2 * t * t * sx * (d + c_mu * k2 / (sc_t * ep))
        + PI * t * sy * cx * cz
        - 2.0 * pi2 * c_mu * t * t * cx * cx * (sx + 2.0) / (sc_t * ep);

    let mut f = laminar_fields(p, t);
    f.k = sx + 2.0;
    f.eps = ez + 1.0;
    f.y = sx + 2.0;
    (
        f,
        Sources {
            f_u: Vec3::new(f1, f2, f3),
            f_k,
            f_eps,
            f_y,
        },
    )
}

/// Gaussian profile carried by a solid-body rotation and spread by diffusion.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSphere {
    pub sigma0: f64,
    pub diffusivity: f64,
}

impl Default for GaussianSphere {
    fn default() -> Self {
        GaussianSphere {
            sigma0: 0.08,
            diffusivity: 1e-2,
        }
    }
}

pub fn gaussian_sphere(p: &Point, t: f64, sigma0: f64, d: f64) -> ExactFields {
    let (st, ct) = t.sin_cos();
    let xb = p.x * ct + p.y * st;
    let yb = -p.x * st + p.y * ct;
    let r = (xb + 0.25).powi(2) + yb * yb + p.z * p.z;
    let s2 = sigma0 * sigma0 + 2.0 * t * d;
    ExactFields {
        pi: 0.0,
        u: Vec3::new(-p.y, p.x, 0.0),
        k: 0.0,
        eps: 0.0,
        y: (sigma0 * sigma0 / s2).powf(1.5) * (-r / (2.0 * s2)).exp(),
    }
}

impl ExactSolution for GaussianSphere {
    fn fields(&self, p: &Point, t: f64) -> ExactFields {
        gaussian_sphere(p, t, self.sigma0, self.diffusivity)
    }

    fn sources(&self, p: &Point, _t: f64) -> Sources {
        Sources {
            f_u: Vec3::new(-p.x, -p.y, 0.0),
            ..Default::default()
        }
    }
}
