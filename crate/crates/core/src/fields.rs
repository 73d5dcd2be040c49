//! Discrete unknowns and the transfers between the finite volume nodes and
//! the finite element mesh.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::mesh::{DualMesh, FeMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Rusanov flux on cell values.
    Order1,
    /// Kolgan slopes with a two-point orthogonal diffusion flux.
    CvcOrth,
    /// Kolgan slopes with Galerkin diffusion.
    CvcG,
    Lader,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "order1" | "rusanov" => Ok(Scheme::Order1),
            "cvc-orth" => Ok(Scheme::CvcOrth),
            "cvc-g" => Ok(Scheme::CvcG),
            "lader" => Ok(Scheme::Lader),
            other => Err(Error::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Order1 => "order1",
            Scheme::CvcOrth => "cvc-orth",
            Scheme::CvcG => "cvc-g",
            Scheme::Lader => "lader",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    /// `2|U.eta|` for every equation.
    Coupled,
    /// `2|U.eta|` for momentum and `|U.eta|` for the scalars.
    Decoupled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceCoeffs {
    pub c_mu: f64,
    pub c1_eps: f64,
    pub c2_eps: f64,
    pub sigma_k: f64,
    pub sigma_eps: f64,
    pub sc_t: f64,
}

impl Default for TurbulenceCoeffs {
    fn default() -> Self {
        TurbulenceCoeffs {
            c_mu: 0.09,
            c1_eps: 1.44,
            c2_eps: 1.92,
            sigma_k: 1.0,
            sigma_eps: 1.3,
            sc_t: 0.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub rho: f64,
    pub mu: f64,
    /// Molecular diffusivity of the species.
    pub diffusivity: f64,
    pub cfl: f64,
    pub scheme: Scheme,
    /// Include the diffusion term when evolving the LADER flux states.
    pub lader_flux_diffusion: bool,
    pub coeffs: TurbulenceCoeffs,
    pub alpha_mode: AlphaMode,
    pub solver_tol: f64,
    pub solver_max_iter: usize,
    pub k_floor: f64,
    pub eps_floor: f64,
    pub turbulence: bool,
    pub n_species: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            rho: 1.0,
            mu: 1e-2,
            diffusivity: 0.0,
            cfl: 1.0,
            scheme: Scheme::Lader,
            lader_flux_diffusion: true,
            coeffs: TurbulenceCoeffs::default(),
            alpha_mode: AlphaMode::Decoupled,
            solver_tol: 1e-10,
            solver_max_iter: 5000,
            k_floor: 1e-10,
            eps_floor: 1e-10,
            turbulence: false,
            n_species: 0,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::Config("density must be positive".into()));
        }
        if !(self.mu >= 0.0) || !(self.diffusivity >= 0.0) {
            return Err(Error::Config("viscosity and diffusivity must be non-negative".into()));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::Config("cfl must be positive".into()));
        }
        if !(self.solver_tol > 0.0) || self.solver_max_iter == 0 {
            return Err(Error::Config("invalid linear solver settings".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub w_u: Vec<Vec3>,
    pub w_k: Vec<f64>,
    pub w_eps: Vec<f64>,
    /// One array per species.
    pub w_y: Vec<Vec<f64>>,
    /// Pressure perturbation at the FE vertices.
    pub pi: Vec<f64>,
    pub mu_t: Vec<f64>,
    pub time: f64,
    pub step: u64,
}

impl FlowState {
    pub fn zeros(n_nodes: usize, n_vertices: usize, n_species: usize) -> Self {
        FlowState {
            w_u: vec![Vec3::zeros(); n_nodes],
            w_k: vec![0.0; n_nodes],
            w_eps: vec![0.0; n_nodes],
            w_y: vec![vec![0.0; n_nodes]; n_species],
            pi: vec![0.0; n_vertices],
            mu_t: vec![0.0; n_nodes],
            time: 0.0,
            step: 0,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.w_u.len()
    }

    pub fn check_sizes(&self, dual: &DualMesh) -> Result<()> {
        let n = dual.n_nodes();
        let checks = [
            ("w_u", self.w_u.len(), n),
            ("w_k", self.w_k.len(), n),
            ("w_eps", self.w_eps.len(), n),
            ("mu_t", self.mu_t.len(), n),
            ("pi", self.pi.len(), dual.n_vertices),
        ];
        for (what, actual, expected) in checks {
            if actual != expected {
                return Err(Error::Size {
                    what,
                    expected,
                    actual,
                });
            }
        }
        for y in &self.w_y {
            if y.len() != n {
                return Err(Error::Size {
                    what: "w_y",
                    expected: n,
                    actual: y.len(),
                });
            }
        }
        Ok(())
    }

    /// Index of the first node holding a non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        (0..self.n_nodes()).find(|&i| {
            !(self.w_u[i].iter().all(|x| x.is_finite())
                && self.w_k[i].is_finite()
                && self.w_eps[i].is_finite()
                && self.w_y.iter().all(|y| y[i].is_finite()))
        })
    }
}

/// `u = w_u / rho` at node `i`.
pub fn velocity(state: &FlowState, rho: f64, i: usize) -> Vec3 {
    state.w_u[i] / rho
}

/// Element-wise constant momentum: mean of the four face values.
pub fn momentum_to_tets(w_u: &[Vec3], dual: &DualMesh) -> Vec<Vec3> {
    dual.tet_faces
        .iter()
        .map(|f| (w_u[f[0]] + w_u[f[1]] + w_u[f[2]] + w_u[f[3]]) / 4.0)
        .collect()
}

/// Pressure samples at the four vertices of element `t`.
pub fn pressure_vertex_values(pi: &[f64], fe: &FeMesh, t: usize) -> Result<[f64; 4]> {
    if pi.len() != fe.vertices.len() {
        return Err(Error::Size {
            what: "pressure",
            expected: fe.vertices.len(),
            actual: pi.len(),
        });
    }
    let v = fe.tets[t];
    Ok([pi[v[0]], pi[v[1]], pi[v[2]], pi[v[3]]])
}
