//! Time loop, boundary conditions, configuration and output.

mod config;
mod output;
mod suites;

pub use config::{BoundaryKind, CaseConfig, CaseKind, InitialValues, MeshSource, GAUSSIAN_COUNTS};
pub use output::{format_vtk_mesh, format_vtk_nodes, write_csv, write_vtk};
pub use suites::{convergence_suite, mesh_levels, Suite};

use std::time::Instant;

use crate::closure::{production_gk, reaction_update_k_eps, species_source_update, turbulent_viscosity, KEpsReaction};
use crate::error::{Error, Result};
use crate::fields::{momentum_to_tets, FlowState, SchemeConfig};
use crate::geometry::{Grad3, Point, Vec3};
use crate::mesh::{generate_box_mesh, generate_channel_cylinder, read_mesh, BoxExtents, DualMesh, FeMesh, INLET_TAG};
use crate::projection::{
    assemble_pressure_system, assemble_stiffness, corrected_tet_momentum, post_projection_momentum, solve_pressure, weak_divergence, CsrMatrix,
};
use crate::schemes::{transport_diffusion_step, NodeSources};
use crate::verification::{ErrorAccumulator, ExactFields, ExactSolution, GaussianSphere, MmsLaminar, MmsTurbulent};

/// `dt = min_i CFL L_i^2 / (2|U_i| L_i + nu_i)` with `nu_i = mu + mu_t`, or the
/// larger of that and the species coefficient when species are transported.
pub fn compute_time_step(state: &FlowState, dual: &DualMesh, cfg: &SchemeConfig) -> Result<f64> {
    let mut dt = f64::INFINITY;
    for i in 0..dual.n_nodes() {
        let l = dual.char_length[i];
        let u = state.w_u[i].norm() / cfg.rho;
        let mt = if cfg.turbulence { state.mu_t[i] } else { 0.0 };
        let mut nu = cfg.mu + mt;
        if cfg.n_species > 0 {
            nu = nu.max(cfg.rho * cfg.diffusivity + mt / cfg.coeffs.sc_t);
        }
        let den = 2.0 * u * l + nu;
        if den > 1e-300 {
            dt = dt.min(cfg.cfl * l * l / den);
        }
    }
    if dt.is_finite() {
        Ok(dt)
    } else {
        Err(Error::ZeroDynamics)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    /// `max |W^{n+1} - W^n| / dt` over nodes and momentum components.
    pub residual: f64,
    pub solver_iterations: usize,
    /// Weak divergence of the projected element momentum relative to that of
    /// the intermediate one.
    pub divergence_residual: f64,
}

#[derive(Debug, Clone, Default)]
pub struct RunRecord {
    pub dt: Vec<f64>,
    pub residuals: Vec<f64>,
    pub solver_iterations: Vec<usize>,
    /// Wall-clock seconds spent in each step.
    pub wall_time: Vec<f64>,
    pub steady: bool,
    /// Space-time errors, for cases with an exact solution.
    pub errors: Option<ErrorAccumulator>,
}

impl RunRecord {
    pub fn steps(&self) -> usize {
        self.dt.len()
    }
}

/// A mesh, its dual, the current state and everything needed to advance it.
pub struct Simulation {
    pub config: CaseConfig,
    pub fe: FeMesh,
    pub dual: DualMesh,
    pub state: FlowState,
    node_bc: Vec<Option<BoundaryKind>>,
    stiffness: CsrMatrix,
    exact: Option<Box<dyn ExactSolution>>,
}

pub fn build_mesh(source: &MeshSource) -> Result<FeMesh> {
    match source {
        MeshSource::Box { counts, min, max } => generate_box_mesh(*counts, BoxExtents::new((*min).into(), (*max).into())),
        MeshSource::Channel(spec) => generate_channel_cylinder(spec),
        MeshSource::File(path) => read_mesh(path),
    }
}

impl Simulation {
    pub fn new(config: CaseConfig) -> Result<Self> {
        let fe = build_mesh(&config.mesh)?;
        Self::with_mesh(config, fe)
    }

    pub fn with_mesh(config: CaseConfig, fe: FeMesh) -> Result<Self> {
        config.validate()?;
        let dual = DualMesh::build(&fe)?;
        let mut present = std::collections::BTreeSet::new();
        for i in 0..dual.n_nodes() {
            if let Some(t) = dual.boundary_tag[i] {
                present.insert(t);
            }
        }
        for tag in config.bcs.keys() {
            if !present.contains(tag) {
                return Err(Error::Boundary(format!("boundary tag {tag} does not exist in the mesh")));
            }
        }
        // tags missing from the table are treated as outflow
        let node_bc = dual
            .boundary_tag
            .iter()
            .map(|t| t.map(|t| config.bcs.get(&t).copied().unwrap_or(BoundaryKind::Neumann)))
            .collect();
        let s = &config.scheme;
        let exact: Option<Box<dyn ExactSolution>> = match config.case {
            CaseKind::Mms1 => Some(Box::new(MmsLaminar { mu: s.mu })),
            CaseKind::Mms2 => Some(Box::new(MmsTurbulent {
                mu: s.mu,
                diffusivity: s.diffusivity,
                coeffs: s.coeffs,
            })),
            CaseKind::Gaussian => Some(Box::new(GaussianSphere {
                sigma0: 0.08,
                diffusivity: s.diffusivity,
            })),
            CaseKind::Cylinder | CaseKind::Uniform => None,
        };
        let stiffness = assemble_stiffness(&fe, &dual);
        let mut sim = Simulation {
            state: FlowState::zeros(dual.n_nodes(), fe.vertices.len(), s.n_species),
            config,
            fe,
            dual,
            node_bc,
            stiffness,
            exact,
        };
        sim.initialise();
        Ok(sim)
    }

    pub fn exact(&self) -> Option<&dyn ExactSolution> {
        self.exact.as_deref()
    }

    /// Prescribed values at a boundary point of tag `tag`.
    fn boundary_values(&self, p: &Point, t: f64, tag: i32) -> ExactFields {
        if let Some(ex) = &self.exact {
            return ex.fields(p, t);
        }
        let init = &self.config.init;
        let u = match self.config.case {
            CaseKind::Cylinder if tag == INLET_TAG => {
                let h = match &self.config.mesh {
                    MeshSource::Channel(c) => c.height,
                    _ => 0.41,
                };
                let (y, z) = (p.y, p.z);
                Vec3::new(16.0 * self.config.inflow_u * y * z * (h - y) * (h - z) / h.powi(4), 0.0, 0.0)
            }
            CaseKind::Cylinder => Vec3::zeros(),
            _ => init.u,
        };
        ExactFields {
            pi: 0.0,
            u,
            k: init.k,
            eps: init.eps,
            y: init.y,
        }
    }

    fn initialise(&mut self) {
        let rho = self.config.scheme.rho;
        let st = &mut self.state;
        for i in 0..self.dual.n_nodes() {
            let p = self.dual.nodes[i];
            let f = match &self.exact {
                Some(ex) => ex.fields(&p, 0.0),
                None => {
                    let init = self.config.init;
                    ExactFields {
                        pi: 0.0,
                        u: if self.config.case == CaseKind::Cylinder { Vec3::zeros() } else { init.u },
                        k: init.k,
                        eps: init.eps,
                        y: init.y,
                    }
                }
            };
            st.w_u[i] = f.u * rho;
            st.w_k[i] = f.k * rho;
            st.w_eps[i] = f.eps * rho;
            for y in st.w_y.iter_mut() {
                y[i] = f.y * rho;
            }
        }
        if let Some(ex) = &self.exact {
            for (v, p) in self.fe.vertices.iter().enumerate() {
                st.pi[v] = ex.fields(p, 0.0).pi;
            }
        }
        self.apply_momentum_bc(0.0);
        self.apply_scalar_bc(0.0);
        self.refresh_mu_t();
    }

    fn refresh_mu_t(&mut self) {
        let s = &self.config.scheme;
        if !s.turbulence {
            return;
        }
        let st = &mut self.state;
        for i in 0..st.n_nodes() {
            st.mu_t[i] = turbulent_viscosity(st.w_k[i], st.w_eps[i], s.rho, s.coeffs.c_mu, s.eps_floor);
        }
    }

    fn apply_momentum_bc(&mut self, t: f64) {
        let rho = self.config.scheme.rho;
        for i in 0..self.dual.n_nodes() {
            let Some(kind) = self.node_bc[i] else { continue };
            let tag = self.dual.boundary_tag[i].unwrap_or(0);
            let w = self.state.w_u[i];
            self.state.w_u[i] = match kind {
                BoundaryKind::Neumann => continue,
                BoundaryKind::DirichletViscous | BoundaryKind::ExactMms => {
                    self.boundary_values(&self.dual.nodes[i], t, tag).u * rho
                }
                BoundaryKind::DirichletInviscid => {
                    let n = self.dual.boundary_normal[i].normalize();
                    let wd = self.boundary_values(&self.dual.nodes[i], t, tag).u * rho;
                    w - n * (w.dot(&n) - wd.dot(&n))
                }
            };
        }
    }

    /// Exact-solution nodes get every scalar; Dirichlet nodes only where the
    /// prescribed velocity enters the domain.
    fn apply_scalar_bc(&mut self, t: f64) {
        let rho = self.config.scheme.rho;
        for i in 0..self.dual.n_nodes() {
            let Some(kind) = self.node_bc[i] else { continue };
            let tag = self.dual.boundary_tag[i].unwrap_or(0);
            let f = match kind {
                BoundaryKind::Neumann => continue,
                BoundaryKind::ExactMms => self.boundary_values(&self.dual.nodes[i], t, tag),
                BoundaryKind::DirichletViscous | BoundaryKind::DirichletInviscid => {
                    let f = self.boundary_values(&self.dual.nodes[i], t, tag);
                    if f.u.dot(&self.dual.boundary_normal[i]) >= 0.0 {
                        continue;
                    }
                    f
                }
            };
            let st = &mut self.state;
            if self.config.scheme.turbulence {
                st.w_k[i] = f.k * rho;
                st.w_eps[i] = f.eps * rho;
            }
            for y in st.w_y.iter_mut() {
                y[i] = f.y * rho;
            }
        }
    }

    pub fn time_step(&self) -> Result<f64> {
        compute_time_step(&self.state, &self.dual, &self.config.scheme)
    }

    /// Velocity gradient at every node, averaged over the adjacent elements.
    fn nodal_velocity_gradients(&self, w_u: &[Vec3]) -> Vec<Grad3> {
        let rho = self.config.scheme.rho;
        let comps: [Vec<f64>; 3] = [0, 1, 2].map(|a| w_u.iter().map(|w| w[a] / rho).collect());
        let per_tet: Vec<Grad3> = (0..self.dual.n_tets())
            .map(|t| {
                let mut g = Grad3::zeros();
                for (a, c) in comps.iter().enumerate() {
                    g.set_row(a, &self.dual.node_field_gradient(t, c).transpose());
                }
                g
            })
            .collect();
        self.dual.node_mean(&per_tet)
    }

    fn node_sources(&self, t: f64) -> Vec<crate::verification::Sources> {
        match &self.exact {
            Some(ex) => self.dual.nodes.iter().map(|p| ex.sources(p, t)).collect(),
            None => Vec::new(),
        }
    }

    /// One time step of length `dt`: transport-diffusion, projection,
    /// post-projection, then the turbulence and species source updates.
    pub fn advance(&mut self, dt: f64) -> Result<StepInfo> {
        let step = self.state.step;
        self.advance_inner(dt).map_err(|e| e.at_step(step))
    }

    fn advance_inner(&mut self, dt: f64) -> Result<StepInfo> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        let cfg = self.config.scheme.clone();
        let nn = self.dual.n_nodes();
        let t0 = self.state.time;
        let t1 = t0 + dt;
        // manufactured forcing is sampled at the middle of the step
        let src = self.node_sources(t0 + 0.5 * dt);
        let has_src = !src.is_empty();

        let mut ns = NodeSources::default();
        if has_src {
            ns.f_u = src.iter().map(|s| s.f_u).collect();
        }
        if cfg.scheme == crate::fields::Scheme::Lader {
            ns.scalar_rates = self.scalar_rates(&src);
        }

        let old_w_u = self.state.w_u.clone();
        let old_k = self.state.w_k.clone();
        let old_eps = self.state.w_eps.clone();
        let inter = transport_diffusion_step(&self.state, &self.dual, &self.fe, &cfg, dt, &ns)?;
        // projection
        self.state.w_u = inter.w_u;
        self.apply_momentum_bc(t1);
        let g = self.boundary_flux(t1)?;
        let w_tets = momentum_to_tets(&self.state.w_u, &self.dual);
        let sys = assemble_pressure_system(&self.fe, &self.dual, &self.stiffness, &w_tets, dt, &g);
        let (delta, info) = solve_pressure(&sys, cfg.solver_tol, cfg.solver_max_iter)?;
        let divergence_residual = {
            let norm = |v: Vec<f64>| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let before = norm(weak_divergence(&self.fe, &self.dual, &w_tets, &g));
            let projected = corrected_tet_momentum(&w_tets, &delta, &self.fe, &self.dual, dt);
            let after = norm(weak_divergence(&self.fe, &self.dual, &projected, &g));
            if before > 0.0 {
                after / before
            } else {
                after
            }
        };
        self.state.w_u = post_projection_momentum(&self.state.w_u, &delta, &self.fe, &self.dual, dt);
        for (p, d) in self.state.pi.iter_mut().zip(&delta) {
            *p += d;
        }
        self.apply_momentum_bc(t1);

        // turbulence and species
        if cfg.turbulence {
            self.state.w_k = inter.w_k;
            self.state.w_eps = inter.w_eps;
            self.refresh_mu_t();
            let grads = self.nodal_velocity_gradients(&self.state.w_u);
            for i in 0..nn {
                let g_k = production_gk(&grads[i], self.state.mu_t[i]);
                let (f_k, f_eps) = if has_src { (src[i].f_k, src[i].f_eps) } else { (0.0, 0.0) };
                let r = KEpsReaction {
                    w_k_tilde: self.state.w_k[i],
                    w_eps_tilde: self.state.w_eps[i],
                    w_k_old: old_k[i],
                    w_eps_old: old_eps[i],
                    g_k,
                    f_k,
                    f_eps,
                };
                let (k, e) = reaction_update_k_eps(&r, dt, &cfg.coeffs, cfg.rho, cfg.k_floor, cfg.eps_floor);
                self.state.w_k[i] = k;
                self.state.w_eps[i] = e;
            }
        }
        self.state.w_y = inter.w_y;
        if has_src {
            for y in self.state.w_y.iter_mut() {
                for i in 0..nn {
                    y[i] = species_source_update(y[i], src[i].f_y, dt);
                }
            }
        }
        self.state.time = t1;
        self.state.step += 1;
        self.apply_scalar_bc(t1);
        self.refresh_mu_t();

        if let Some(node) = self.state.first_non_finite() {
            return Err(Error::Divergence {
                node,
                step: self.state.step,
            });
        }
        let residual = self
            .state
            .w_u
            .iter()
            .zip(&old_w_u)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
            / dt;
        Ok(StepInfo {
            dt,
            residual,
            solver_iterations: info.iterations,
            divergence_residual,
        })
    }

    /// Reaction and forcing rates of k, epsilon and the species at `t^n`,
    /// used by LADER to evolve the interface states.
    fn scalar_rates(&self, src: &[crate::verification::Sources]) -> Vec<Vec<f64>> {
        let cfg = &self.config.scheme;
        let nn = self.dual.n_nodes();
        let st = &self.state;
        let mut rates = Vec::new();
        if cfg.turbulence {
            let grads = self.nodal_velocity_gradients(&st.w_u);
            let mut rk = vec![0.0; nn];
            let mut re = vec![0.0; nn];
            for i in 0..nn {
                let g_k = production_gk(&grads[i], st.mu_t[i]);
                let k = st.w_k[i].max(cfg.rho * cfg.k_floor);
                let e = st.w_eps[i].max(cfg.rho * cfg.eps_floor);
                rk[i] = g_k - e;
                re[i] = cfg.coeffs.c1_eps * e / k * g_k - cfg.coeffs.c2_eps * e * e / k;
                if !src.is_empty() {
                    rk[i] += src[i].f_k;
                    re[i] += src[i].f_eps;
                }
            }
            rates.push(rk);
            rates.push(re);
        }
        for _ in 0..cfg.n_species {
            rates.push(if src.is_empty() {
                vec![0.0; nn]
            } else {
                src.iter().map(|s| s.f_y).collect()
            });
        }
        rates
    }

    /// Normal momentum per unit area on every boundary node, made compatible
    /// with the zero total divergence by shifting the outflow faces (or all
    /// faces when there is no outflow).
    fn boundary_flux(&self, t: f64) -> Result<Vec<f64>> {
        let nn = self.dual.n_nodes();
        let rho = self.config.scheme.rho;
        let mut g = vec![0.0; nn];
        let (mut flux, mut area_free, mut area_all) = (0.0, 0.0, 0.0);
        for i in 0..nn {
            let Some(kind) = self.node_bc[i] else { continue };
            let bn = self.dual.boundary_normal[i];
            let a = bn.norm();
            let n = bn / a;
            let tag = self.dual.boundary_tag[i].unwrap_or(0);
            g[i] = match kind {
                BoundaryKind::Neumann => {
                    area_free += a;
                    self.state.w_u[i].dot(&n)
                }
                _ => self.boundary_values(&self.dual.nodes[i], t, tag).u.dot(&n) * rho,
            };
            flux += g[i] * a;
            area_all += a;
        }
        if area_all == 0.0 {
            return Ok(g);
        }
        let (shift, only_free) = if area_free > 0.0 {
            (flux / area_free, true)
        } else {
            (flux / area_all, false)
        };
        for i in 0..nn {
            match self.node_bc[i] {
                Some(BoundaryKind::Neumann) => g[i] -= shift,
                Some(_) if !only_free => g[i] -= shift,
                _ => {}
            }
        }
        Ok(g)
    }

    /// Adds the contribution of the current state to the space-time errors.
    pub fn accumulate_errors(&self, acc: &mut ErrorAccumulator, dt: f64) {
        let Some(ex) = &self.exact else { return };
        let cfg = &self.config.scheme;
        let st = &self.state;
        let t = st.time;
        let exact: Vec<ExactFields> = self.dual.nodes.iter().map(|p| ex.fields(p, t)).collect();
        let w = &self.dual.cell_volume;
        if self.config.case != CaseKind::Gaussian {
            // the pressure acting over the last step approximates the mid-step value
            let tp = t - 0.5 * dt;
            let pe: Vec<f64> = self.fe.vertices.iter().map(|p| ex.fields(p, tp).pi).collect();
            acc.add_mean_free("pi", dt, &self.dual.vertex_volume, &st.pi, &pe);
            let ue: Vec<Vec3> = exact.iter().map(|f| f.u * cfg.rho).collect();
            acc.add_vector("w_u", dt, w, &st.w_u, &ue);
        }
        if cfg.turbulence {
            let ke: Vec<f64> = exact.iter().map(|f| f.k * cfg.rho).collect();
            let ee: Vec<f64> = exact.iter().map(|f| f.eps * cfg.rho).collect();
            acc.add_scalar("w_k", dt, w, &st.w_k, &ke);
            acc.add_scalar("w_eps", dt, w, &st.w_eps, &ee);
        }
        if let Some(y) = st.w_y.first() {
            let ye: Vec<f64> = exact.iter().map(|f| f.y * cfg.rho).collect();
            acc.add_scalar("w_y", dt, w, y, &ye);
        }
    }

    /// Advances to `t_end`, the step limit or the steady criterion.
    pub fn run(&mut self) -> Result<RunRecord> {
        let mut rec = RunRecord::default();
        let mut acc = self.exact.as_ref().map(|_| ErrorAccumulator::new());
        let t_end = self.config.t_end;
        let out = self.config.output_dir.clone();
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            self.write_snapshot(dir)?;
        }
        loop {
            if self.state.time >= t_end * (1.0 - 1e-12) {
                break;
            }
            if self.config.max_steps.is_some_and(|m| rec.steps() as u64 >= m) {
                break;
            }
            let mut dt = self.time_step()?;
            let remaining = t_end - self.state.time;
            if dt >= remaining * (1.0 - 1e-9) {
                dt = remaining;
            }
            let clock = Instant::now();
            let info = match self.advance(dt) {
                Ok(info) => info,
                Err(e) => {
                    if let Some(dir) = &out {
                        let _ = write_vtk(&self.state, &self.dual, &self.fe, &dir.join("diverged"));
                    }
                    return Err(e);
                }
            };
            rec.dt.push(dt);
            rec.residuals.push(info.residual);
            rec.solver_iterations.push(info.solver_iterations);
            rec.wall_time.push(clock.elapsed().as_secs_f64());
            if let Some(acc) = acc.as_mut() {
                self.accumulate_errors(acc, dt);
            }
            if let Some(dir) = &out {
                if self.state.step % self.config.output_every == 0 {
                    self.write_snapshot(dir)?;
                }
            }
            if self.config.steady_threshold.is_some_and(|th| info.residual <= th) {
                rec.steady = true;
                break;
            }
        }
        if let Some(dir) = &out {
            if self.state.step % self.config.output_every != 0 {
                self.write_snapshot(dir)?;
            }
        }
        rec.errors = acc;
        Ok(rec)
    }

    fn write_snapshot(&self, dir: &std::path::Path) -> Result<()> {
        let base = dir.join(format!("step_{:06}", self.state.step));
        write_vtk(&self.state, &self.dual, &self.fe, &base)
    }
}

/// Builds the case and runs it.
pub fn run_case(config: CaseConfig) -> Result<(Simulation, RunRecord)> {
    let mut sim = Simulation::new(config)?;
    let rec = sim.run()?;
    Ok((sim, rec))
}
