//! Acceptance run: one PASS/FAIL line per criterion. Criteria that are not
//! met print FAIL with the measured values; the process still exits normally
//! so the rest of the suite runs. Runtime is dominated by the refinement
//! studies and the cylinder case (hours on one core).

use std::io::Write;
use std::time::Instant;

use fvfe::driver::{convergence_suite, run_case, CaseConfig, CaseKind, Simulation, Suite};
use fvfe::fields::{FlowState, Scheme, SchemeConfig};
use fvfe::geometry::{galerkin_gradient, minmod, Point, Vec3};
use fvfe::lader1d::{convergence_study_1d, stability_scan, Adre1d, FourierMode, StabilityOrthotope};
use fvfe::mesh::{generate_box_mesh, generate_cube_mesh, BoxExtents, DualMesh, CYLINDER_TAG};
use fvfe::schemes::flux::{eno_select, kolgan_flux, rusanov_flux};
use fvfe::schemes::{pressure_face_term, transport_diffusion_step, NodeSources};
use fvfe::verification::{
    drag_lift, pde_residuals, surface_forces, ErrorReport, ExactSolution, GaussianSphere, MmsLaminar, MmsTurbulent,
    SurfaceSample,
};
use rand::{Rng, SeedableRng};

fn say(line: &str) {
    // bypasses output capture so the lines show up in `cargo test`
    let mut e = std::io::stderr();
    let _ = writeln!(e, "{line}");
}

struct Verdict {
    ok: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true, notes: Vec::new() }
    }
    fn check(&mut self, ok: bool, note: String) {
        if !ok {
            self.ok = false;
            self.notes.push(format!("FAILED {note}"));
        } else {
            self.notes.push(note);
        }
    }
    fn report(self, n: usize, name: &str, clock: Instant) {
        let tag = if self.ok { "PASS" } else { "FAIL" };
        say(&format!(
            "{tag} criterion {n} ({name}, {:.0}s): {}",
            clock.elapsed().as_secs_f64(),
            self.notes.join("; ")
        ));
    }
}

fn orders_of(r: &ErrorReport, v: &str) -> Vec<f64> {
    r.orders(v).unwrap_or_default()
}

fn fmt(v: &[f64]) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", s.join(", "))
}

fn fmt_e(v: &[f64]) -> String {
    let s: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", s.join(", "))
}

fn suite(s: Suite, scheme: Scheme) -> Result<ErrorReport, String> {
    convergence_suite(s, scheme, 3, |name, steps, secs| {
        say(&format!("  {s:?} {scheme} {name}: {steps} steps, {secs:.1}s"));
    })
    .map_err(|e| e.to_string())
}

/// Orders within `band` of the published ones and errors within `factor`.
fn compare(v: &mut Verdict, label: &str, r: &ErrorReport, var: &str, paper_err: &[f64], paper_ord: &[f64], band: f64, factor: f64) {
    let e = r.error(var).unwrap_or(&[]).to_vec();
    let o = orders_of(r, var);
    if !paper_ord.is_empty() {
        let ok = o.len() == paper_ord.len() && o.iter().zip(paper_ord).all(|(a, b)| (a - b).abs() <= band);
        v.check(ok, format!("{label} {var} orders {} vs {} (+-{band})", fmt(&o), fmt(paper_ord)));
    }
    let ok = e.len() == paper_err.len() && e.iter().zip(paper_err).all(|(a, b)| a / b <= factor && b / a <= factor);
    v.check(ok, format!("{label} {var} errors {} vs {} (x{factor})", fmt_e(&e), fmt_e(paper_err)));
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    let run = |s| match suite(Suite::Mms1, s) {
        Ok(r) => Some(r),
        Err(e) => {
            say(&format!("  {s}: {e}"));
            None
        }
    };
    match run(Scheme::Lader) {
        Some(r) => {
            for var in ["pi", "w_u"] {
                let o = orders_of(&r, var);
                v.check(o.len() == 2 && o.iter().all(|&x| x >= 1.8), format!("LADER {var} orders {} >= 1.8", fmt(&o)));
            }
            compare(&mut v, "LADER", &r, "pi", &[4.10e-2, 8.74e-3, 2.03e-3], &[2.23, 2.11], 0.4, 3.0);
            compare(&mut v, "LADER", &r, "w_u", &[2.61e-2, 5.76e-3, 1.24e-3], &[2.18, 2.22], 0.4, 3.0);
        }
        None => v.check(false, "LADER run failed".into()),
    }
    match run(Scheme::CvcG) {
        Some(r) => {
            let (op, ou) = (orders_of(&r, "pi"), orders_of(&r, "w_u"));
            v.check(op.len() == 2 && op.iter().all(|&x| x >= 1.7), format!("CVC-G pi orders {} >= 1.7", fmt(&op)));
            v.check(ou.len() == 2 && ou.iter().all(|&x| x >= 1.4), format!("CVC-G w_u orders {} >= 1.4", fmt(&ou)));
            compare(&mut v, "CVC-G", &r, "pi", &[5.98e-2, 1.58e-2, 4.58e-3], &[1.92, 1.78], 0.4, 3.0);
            compare(&mut v, "CVC-G", &r, "w_u", &[5.41e-2, 1.88e-2, 6.52e-3], &[1.52, 1.53], 0.4, 3.0);
        }
        None => v.check(false, "CVC-G run failed".into()),
    }
    match run(Scheme::Order1) {
        Some(r) => {
            for var in ["pi", "w_u"] {
                let o = orders_of(&r, var);
                v.check(
                    o.len() == 2 && o.iter().all(|&x| (0.7..=1.3).contains(&x)),
                    format!("order1 {var} orders {} in [0.7, 1.3]", fmt(&o)),
                );
            }
            compare(&mut v, "order1", &r, "pi", &[1.24e-1, 5.70e-2, 2.96e-2], &[1.12, 0.95], 0.4, 3.0);
            compare(&mut v, "order1", &r, "w_u", &[6.40e-2, 3.32e-2, 1.78e-2], &[0.95, 0.90], 0.4, 3.0);
        }
        None => v.check(false, "order1 run failed".into()),
    }
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    match suite(Suite::Mms2, Scheme::Lader) {
        Ok(r) => {
            for var in ["w_k", "w_eps", "w_y"] {
                let o = orders_of(&r, var);
                v.check(o.len() == 2 && o.iter().all(|&x| x >= 1.8), format!("LADER {var} orders {} >= 1.8", fmt(&o)));
            }
        }
        Err(e) => v.check(false, format!("LADER run failed: {e}")),
    }
    match suite(Suite::Mms2, Scheme::CvcOrth) {
        Ok(r) => {
            let o = orders_of(&r, "w_k");
            v.check(o.len() == 2 && o.iter().all(|&x| x <= 1.0), format!("CVC-orth w_k orders {} <= 1.0", fmt(&o)));
        }
        Err(e) => v.check(false, format!("CVC-orth run failed: {e}")),
    }
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    match suite(Suite::Gaussian, Scheme::Lader) {
        Ok(r) => {
            let o = orders_of(&r, "w_y");
            let e = r.error("w_y").unwrap_or(&[]).to_vec();
            v.check(o.len() == 2 && o.iter().all(|&x| x >= 1.8), format!("LADER w_y orders {} >= 1.8", fmt(&o)));
            let last = e.last().copied().unwrap_or(f64::INFINITY);
            v.check(last <= 2.0 * 5.55e-4, format!("LADER M3 error {last:.3e} <= {:.3e}", 2.0 * 5.55e-4));
        }
        Err(e) => v.check(false, format!("LADER run failed: {e}")),
    }
    match suite(Suite::Gaussian, Scheme::CvcG) {
        Ok(r) => {
            let o = orders_of(&r, "w_y");
            v.check(
                o.len() == 2 && o.iter().all(|&x| (1.4..=2.0).contains(&x)),
                format!("CVC-G w_y orders {} in [1.4, 2.0]", fmt(&o)),
            );
        }
        Err(e) => v.check(false, format!("CVC-G run failed: {e}")),
    }
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    let o = StabilityOrthotope::new(0.3, 0.2, -0.5).unwrap();
    let s = stability_scan(&o, 21, 256).unwrap();
    v.check(s.max_abs <= 1.0 + 1e-12, format!("max|A| over 21^3 x 256 = {:.15}", s.max_abs));
    let u = stability_scan(&StabilityOrthotope::new(1.5, 0.0, 0.0).unwrap(), 3, 256).unwrap();
    v.check(u.max_abs > 1.0 && u.at[1] == 1.5, format!("(c,d,r)=(1.5,0,0) gives max|A| = {:.3}", u.max_abs));
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (c, d, r) = (rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.2), rng.gen_range(-0.5..0.0));
        let q: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n0 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut s = Adre1d::new(q, 0.0, 1.0, c, r).unwrap();
        for _ in 0..5000 {
            s.step(1.0, &d).unwrap();
        }
        let n1 = s.q.iter().map(|x| x * x).sum::<f64>().sqrt();
        worst = worst.max(n1 / n0);
    }
    v.check(worst <= 1.0 + 1e-10, format!("5000-step growth of the l2 norm at 20 random points <= {worst:.3e}"));
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    let k = 2.0 * std::f64::consts::PI;
    let cells = [20, 40, 80, 160, 320, 640];
    let cases = [
        ("combined", FourierMode { lambda: 1.0, alpha: 0.01, beta: -0.5, k }),
        ("advection", FourierMode { lambda: 1.0, alpha: 0.0, beta: 0.0, k }),
        ("diffusion", FourierMode { lambda: 0.0, alpha: 0.01, beta: 0.0, k }),
        ("reaction", FourierMode { lambda: 0.0, alpha: 0.0, beta: -0.5, k }),
    ];
    for (name, m) in cases {
        // Courant number 0.25, diffusion number capped at 0.2
        let dt = |dx: f64| {
            let mut dt = 0.25 * dx;
            if m.alpha > 0.0 {
                dt = dt.min(0.2 * dx * dx / m.alpha);
            }
            dt
        };
        match convergence_study_1d(&m, &cells, 1.0, dt) {
            Ok(c) => v.check(c.orders.iter().all(|&o| o >= 1.8), format!("{name} orders {}", fmt(&c.orders))),
            Err(e) => v.check(false, format!("{name}: {e}")),
        }
    }
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = rand::rngs::StdRng::seed_from_u64(6);

    // flux antisymmetry
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut r = || rng.gen_range(-2.0..2.0f64);
        let (wi, wj, ui, uj, a, wl, wr) = (r(), r(), r(), r(), r().abs(), r(), r());
        worst = worst.max((rusanov_flux(wi, wj, ui, uj, a) + rusanov_flux(wj, wi, -uj, -ui, a)).abs());
        worst = worst.max((kolgan_flux(wi, wj, wl, wr, ui, uj, a) + kolgan_flux(wj, wi, wr, wl, -uj, -ui, a)).abs());
    }
    v.check(worst <= 1e-13, format!("flux antisymmetry on 1000 interfaces {worst:.1e}"));

    // free stream through the transport stage and through full steps
    let fe = generate_box_mesh([3, 3, 3], BoxExtents::new([0.0, 0.0, 0.0], [1.0, 0.8, 1.2])).unwrap();
    let dual = DualMesh::build(&fe).unwrap();
    let mut worst: f64 = 0.0;
    for scheme in [Scheme::Order1, Scheme::CvcOrth, Scheme::CvcG, Scheme::Lader] {
        let cfg = SchemeConfig { scheme, turbulence: true, n_species: 1, diffusivity: 1e-3, ..SchemeConfig::default() };
        let mut s = FlowState::zeros(dual.n_nodes(), fe.vertices.len(), 1);
        s.w_u.iter_mut().for_each(|w| *w = Vec3::new(0.6, -0.2, 0.3));
        s.w_k.iter_mut().for_each(|k| *k = 0.02);
        s.w_eps.iter_mut().for_each(|e| *e = 0.01);
        s.w_y[0].iter_mut().for_each(|y| *y = 0.7);
        s.mu_t.iter_mut().for_each(|m| *m = 0.0036);
        s.pi.iter_mut().for_each(|p| *p = 1.5);
        let s0 = s.clone();
        for _ in 0..10 {
            let out = transport_diffusion_step(&s, &dual, &fe, &cfg, 0.01, &NodeSources::default()).unwrap();
            s.w_u = out.w_u;
            s.w_k = out.w_k;
            s.w_eps = out.w_eps;
            s.w_y = out.w_y;
        }
        for i in 0..dual.n_nodes() {
            worst = worst
                .max((s.w_u[i] - s0.w_u[i]).amax())
                .max((s.w_k[i] - s0.w_k[i]).abs())
                .max((s.w_eps[i] - s0.w_eps[i]).abs())
                .max((s.w_y[0][i] - s0.w_y[0][i]).abs());
        }
        let mut c = CaseConfig::preset(CaseKind::Uniform);
        c.mesh = fvfe::driver::MeshSource::Box { counts: [3, 3, 3], min: Point::zeros(), max: Point::new(1.0, 1.0, 1.0) };
        c.scheme.scheme = scheme;
        c.init.u = Vec3::new(0.4, -0.2, 0.3);
        let mut sim = Simulation::new(c).unwrap();
        let u0 = sim.state.w_u.clone();
        for _ in 0..10 {
            let dt = sim.time_step().unwrap();
            sim.advance(dt).unwrap();
        }
        for (a, b) in sim.state.w_u.iter().zip(&u0) {
            worst = worst.max((a - b).amax());
        }
    }
    v.check(worst <= 1e-11, format!("free stream over 10 steps, every scheme {worst:.1e}"));

    // closed dual cells and volume partition
    let mut closure: f64 = 0.0;
    let mut partition: f64 = 0.0;
    for n in [2, 4, 8] {
        let fe = generate_cube_mesh(n, BoxExtents::new([0.0, -1.0, 0.5], [2.0, 1.0, 1.0])).unwrap();
        let d = DualMesh::build(&fe).unwrap();
        for i in 0..d.n_nodes() {
            let mut s = d.boundary_normal[i];
            for &(_, e) in d.neighbors(i) {
                s += d.outward_normal(e, i);
            }
            closure = closure.max(s.norm() / d.surface_area[i]);
        }
        let vsum: f64 = d.vertex_volume.iter().sum();
        partition = partition
            .max((d.total_volume() / fe.total_volume() - 1.0).abs())
            .max((vsum / fe.total_volume() - 1.0).abs());
    }
    v.check(closure <= 1e-12, format!("closed dual cells on n=2,4,8 {closure:.1e}"));
    v.check(partition <= 1e-12, format!("volume partition {partition:.1e}"));

    // Galerkin gradients of affine fields
    let g = Vec3::new(0.3, -1.2, 2.5);
    let nodal: Vec<f64> = dual.nodes.iter().map(|p| g.dot(p) + 4.0).collect();
    let mut worst: f64 = 0.0;
    for t in 0..dual.n_tets() {
        worst = worst.max((dual.node_field_gradient(t, &nodal) - g).amax());
        let pts = fe.tet_points(t);
        let vals = pts.map(|p| g.dot(&p) - 1.0);
        worst = worst.max((galerkin_gradient(&pts, &vals).unwrap() - g).amax());
    }
    v.check(worst <= 1e-12, format!("Galerkin affine exactness {worst:.1e}"));

    // minmod and ENO selection
    let mut ok = true;
    for _ in 0..1000 {
        let (a, b) = (rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0f64));
        let m = minmod(a, b);
        ok &= m == minmod(b, a);
        ok &= if a * b <= 0.0 { m == 0.0 } else { m.abs() == a.abs().min(b.abs()) && m * a > 0.0 };
        let gu = Vec3::new(rng.gen(), rng.gen(), rng.gen());
        let ga = Vec3::new(rng.gen(), rng.gen(), rng.gen());
        let r = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let s = eno_select(&gu, &ga, &r);
        ok &= s.dot(&r).abs() == gu.dot(&r).abs().min(ga.dot(&r).abs());
        ok &= eno_select(&gu, &gu, &r) == gu;
    }
    v.check(ok, "minmod and ENO selection invariants".into());

    // constant pressure: face weights sum to one and the closed cells feel no force
    let mut worst: f64 = 0.0;
    let mut net = vec![Vec3::zeros(); dual.n_nodes()];
    for f in &dual.interfaces {
        let p = pressure_face_term([2.0; 4], &f.eta);
        worst = worst.max((p - 2.0 * f.eta).amax());
        net[f.i] += p;
        net[f.j] -= p;
    }
    for i in 0..dual.n_nodes() {
        worst = worst.max((net[i] + 2.0 * dual.boundary_normal[i]).amax());
    }
    v.check(worst <= 1e-12, format!("pressure quadrature on constant pi {worst:.1e}"));

    // projection of one manufactured step
    let mut c = CaseConfig::preset(CaseKind::Mms1);
    c.mesh = fvfe::driver::MeshSource::Box { counts: [4, 4, 4], min: Point::zeros(), max: Point::new(1.0, 1.0, 1.0) };
    let tol = c.scheme.solver_tol;
    let mut sim = Simulation::new(c).unwrap();
    let dt = sim.time_step().unwrap();
    match sim.advance(dt) {
        Ok(info) => v.check(
            info.divergence_residual <= 10.0 * tol && sim.state.first_non_finite().is_none(),
            format!("weak divergence after projection {:.1e} (tol {tol:.0e})", info.divergence_residual),
        ),
        Err(e) => v.check(false, format!("manufactured step failed: {e}")),
    }

    // forcing terms against finite-difference residuals
    let lam = MmsLaminar::default();
    let turb = MmsTurbulent::default();
    let gauss = GaussianSphere::default();
    let mut worst = [0.0f64; 3];
    for _ in 0..20 {
        let p = Point::new(rng.gen(), rng.gen(), rng.gen());
        let t = rng.gen_range(0.01..1.0);
        let r = pde_residuals(&lam as &dyn ExactSolution, &p, t, lam.mu, None, None);
        worst[0] = worst[0].max(r.iter().fold(0.0, |a, b| a.max(b.abs())));
        let r = pde_residuals(&turb, &p, t, turb.mu, Some(turb.diffusivity), Some(turb.coeffs));
        worst[1] = worst[1].max(r.iter().fold(0.0, |a, b| a.max(b.abs())));
        let q = Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2));
        let r = pde_residuals(&gauss, &q, 6.0 * t, 1e-2, Some(gauss.diffusivity), None);
        worst[2] = worst[2].max(r.iter().fold(0.0, |a, b| a.max(b.abs())));
    }
    v.check(worst.iter().all(|&w| w <= 1e-6), format!("finite-difference residuals of the forcing {}", fmt_e(&worst)));
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new();
    // analytic check: linear pressure over a closed surface integrates to the volume force
    let samples: Vec<SurfaceSample> = [Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z(), -Vec3::z()]
        .iter()
        .map(|n| {
            // unit cube centred at the origin, inward normals, pi = 2x - 0.5y
            let centre = -0.5 * n;
            SurfaceSample { normal: *n, area: 1.0, pi: 2.0 * centre.x - 0.5 * centre.y, grad_u: Default::default() }
        })
        .collect();
    let f = surface_forces(&samples, 1e-3);
    v.check((f.f_d - 2.0).abs() < 1e-14 && (f.f_l + 0.5).abs() < 1e-14, format!("analytic forces ({}, {})", f.f_d, f.f_l));

    // LADER on the default channel mesh; the run stops at the steady criterion
    // or after four time units, whichever comes first
    let probes = [Point::new(0.45, 0.2, 0.205), Point::new(0.55, 0.2, 0.205)];
    let mut config = CaseConfig::preset(CaseKind::Cylinder);
    config.t_end = 4.0;
    let mu = config.scheme.mu;
    let rho = config.scheme.rho;
    match run_case(config.clone()) {
        Ok((sim, rec)) => {
            let last = rec.residuals.last().copied().unwrap_or(f64::NAN);
            say(&format!(
                "  cylinder: {} elements, {} steps, t = {:.3}, last residual {last:.3e}",
                sim.fe.tets.len(),
                rec.steps(),
                sim.state.time
            ));
            v.check(sim.fe.tets.len() <= 30_000, format!("{} elements", sim.fe.tets.len()));
            v.check(rec.steady, format!("steady after {} steps (residual {last:.2e})", rec.steps()));
            match drag_lift(&sim.state, &sim.dual, &sim.fe, CYLINDER_TAG, mu, rho, probes) {
                Ok((f, dp)) => {
                    v.check((4.0..=9.0).contains(&f.c_d), format!("c_d {:.4} in [4, 9]", f.c_d));
                    v.check((-0.05..=0.05).contains(&f.c_l), format!("c_l {:.4} in [-0.05, 0.05]", f.c_l));
                    v.check((0.1..=0.25).contains(&dp), format!("pressure difference {dp:.4} in [0.1, 0.25]"));
                }
                Err(e) => v.check(false, format!("force evaluation failed: {e}")),
            }
        }
        Err(e) => v.check(false, format!("cylinder run failed: {e}")),
    }

    // first-order reference on the same mesh, reported only
    config.scheme.scheme = Scheme::Order1;
    if let Ok((sim, rec)) = run_case(config) {
        if let Ok((f, dp)) = drag_lift(&sim.state, &sim.dual, &sim.fe, CYLINDER_TAG, mu, rho, probes) {
            say(&format!(
                "  cylinder order1 reference: steady {} after {} steps, c_d {:.4}, c_l {:.4}, dpi {:.4}",
                rec.steady,
                rec.steps(),
                f.c_d,
                f.c_l,
                dp
            ));
        }
    }
    v
}

fn main() {
    let list: [(usize, &str, fn() -> Verdict); 7] = [
        (4, "1D LADER stability", criterion_4),
        (5, "1D LADER order", criterion_5),
        (6, "property suites", criterion_6),
        (1, "MMS laminar convergence", criterion_1),
        (2, "MMS turbulent convergence", criterion_2),
        (3, "Gaussian sphere", criterion_3),
        (7, "cylinder smoke case", criterion_7),
    ];
    // numeric arguments select criteria: `cargo test --test acceptance -- 4 5`
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    for (n, name, f) in list {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let clock = Instant::now();
        f().report(n, name, clock);
    }
}
