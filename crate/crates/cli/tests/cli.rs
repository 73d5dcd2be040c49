use std::process::Command;

fn solver() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solver"))
}

#[test]
fn stability_map_prints_the_grid() {
    let out = solver()
        .args(["stability-map", "--cmax", "0.3", "--dmax", "0.2", "--rmin", "-0.5", "--res", "3", "--ntheta", "64"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,d,r,max_abs_A"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 27);
    assert!(rows.iter().all(|r| r.len() == 4 && r[3] <= 1.0 + 1e-12));
    // the origin is the identity
    let origin = rows.iter().find(|r| r[..3] == [0.0, 0.0, 0.0]).unwrap();
    assert!((origin[3] - 1.0).abs() < 1e-14);
}

#[test]
fn stability_map_rejects_a_positive_reaction_bound() {
    let out = solver().args(["stability-map", "--rmin", "0.1"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn unknown_suite_is_an_argument_error() {
    let out = solver().args(["convergence", "mms9"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn runs_a_manufactured_config_and_writes_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case.cfg");
    std::fs::write(
        &cfg,
        "case = mms1\nscheme = order1\nmesh.n = 2\nphysics.mu = 1e-2\ntime.t_end = 0.05\noutput.dir = out\noutput.every = 1000\n",
    )
    .unwrap();
    let out = solver().arg("run").arg(&cfg).current_dir(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/errors.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("mesh,variable,error,order"));
    let vars: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(vars, ["pi", "w_u"]);
    assert!(std::fs::read_dir(dir.path().join("out")).unwrap().any(|e| e
        .unwrap()
        .path()
        .extension()
        .is_some_and(|x| x == "vtk")));
}

#[test]
fn bad_config_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "case = uniform\nmesh.n = four\n").unwrap();
    let out = solver().arg("run").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
}
