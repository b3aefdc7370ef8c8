use std::path::{Path, PathBuf};
use std::process::Command;

use seamless_metric::cli::Report;
use seamless_metric::fixtures;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seamless-metric"))
}

fn write_obj(dir: &Path, name: &str, pos: &[[f64; 3]], faces: &[[usize; 3]]) -> PathBuf {
    let mut s = String::new();
    for p in pos {
        s += &format!("v {} {} {}\n", p[0], p[1], p[2]);
    }
    for f in faces {
        s += &format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    let path = dir.join(name);
    std::fs::write(&path, s).unwrap();
    path
}

fn octahedron(dir: &Path) -> PathBuf {
    write_obj(dir, "octa.obj", &fixtures::octahedron_positions(), &fixtures::octahedron_faces())
}

fn torus(dir: &Path) -> PathBuf {
    write_obj(
        dir,
        "torus.obj",
        &fixtures::torus_grid_positions(6, 5, 3.0, 1.0),
        &fixtures::torus_grid_faces(6, 5),
    )
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn octahedron_cone_signature_solves_with_force() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = octahedron(dir.path());
    let sig = dir.path().join("sig.toml");
    std::fs::write(&sig, "[vertices]\ndefault = 1\ncones = [[5, 3]]\n").unwrap();
    let out = dir.path().join("out");

    let refused = bin().args(["solve", "--mesh"]).arg(&mesh).arg("--signature").arg(&sig).output().unwrap();
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("GaussBonnetViolated"));

    let status = code(bin().args(["solve", "--force", "--mesh"]).arg(&mesh).arg("--signature").arg(&sig).arg("--out").arg(&out));
    assert_eq!(status, 0);
    let report: Report = serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(report.schema, "v1");
    assert!(report.max_residual <= 1e-10);
    assert!(report.options.forced);
    for f in ["lambda.csv", "stretch.csv", "deviations.csv", "layout.obj"] {
        assert!(out.join(f).is_file(), "{f}");
    }
}

#[test]
fn reports_are_reproducible_outside_timings() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = torus(dir.path());
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        assert_eq!(code(bin().args(["solve", "--mesh"]).arg(&mesh).arg("--out").arg(&out)), 0);
        let mut r: Report = serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
        r.timings = Default::default();
        reports.push(r);
        let text = std::fs::read_to_string(out.join("lambda.csv")).unwrap();
        assert_eq!(text.lines().count(), 1 + 3 * 30);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn two_cone_torus_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = torus(dir.path());
    let sig = dir.path().join("sig.toml");
    std::fs::write(&sig, "[vertices]\ncones = [[0, 3], [14, 5]]\n").unwrap();
    for sub in ["solve", "validate"] {
        let out = bin().arg(sub).arg("--mesh").arg(&mesh).arg("--signature").arg(&sig).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "{sub}");
        let text = String::from_utf8_lossy(&out.stdout) + String::from_utf8_lossy(&out.stderr);
        assert!(text.contains("KnownInvalid_TwoCone35"), "{text}");
    }
    std::fs::write(&sig, "[loops]\nk = [0, 2]\n").unwrap();
    let out = bin().arg("validate").arg("--mesh").arg(&mesh).arg("--signature").arg(&sig).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("KnownInvalid_FlatTorusNontrivialLoop"));
    std::fs::write(&sig, "[vertices]\ncones = [[0, 3], [14, 5], [7, 3], [21, 5]]\n[loops]\nk = [1, -1]\n").unwrap();
    assert_eq!(code(bin().arg("validate").arg("--mesh").arg(&mesh).arg("--signature").arg(&sig)), 0);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(bin().args(["solve", "--signature", "auto-trivial", "--mesh", "/nonexistent/mesh.obj"])), 5);
    let quad = dir.path().join("quad.obj");
    std::fs::write(&quad, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap();
    assert_eq!(code(bin().arg("solve").arg("--mesh").arg(&quad)), 2);
    let mesh = torus(dir.path());
    let sig = dir.path().join("bad.toml");
    std::fs::write(&sig, "[vertices]\nbogus = 1\n").unwrap();
    assert_eq!(code(bin().arg("solve").arg("--mesh").arg(&mesh).arg("--signature").arg(&sig)), 2);
    assert_eq!(code(bin().args(["solve", "--mode", "sideways", "--mesh"]).arg(&mesh)), 2);
    assert_eq!(code(bin().arg("stats")), 5);
    // an iteration budget too small to converge is a solver failure
    let octa = octahedron(dir.path());
    let sig = dir.path().join("cones.toml");
    std::fs::write(&sig, "[vertices]\ndefault = 1\ncones = [[5, 3]]\n").unwrap();
    assert_eq!(
        code(bin().args(["solve", "--force", "--max-iter", "2", "--mesh"]).arg(&octa).arg("--signature").arg(&sig)),
        4
    );
}

#[test]
fn stats_tables() {
    let dir = tempfile::tempdir().unwrap();
    let octa = octahedron(dir.path());
    let sig = dir.path().join("cones.toml");
    std::fs::write(&sig, "[vertices]\ndefault = 1\ncones = [[5, 3]]\n").unwrap();
    let good = dir.path().join("good");
    let bad = dir.path().join("bad");
    bin().args(["solve", "--force", "--mesh"]).arg(&octa).arg("--signature").arg(&sig).arg("--out").arg(&good).output().unwrap();
    bin().args(["solve", "--force", "--max-iter", "2", "--mesh"]).arg(&octa).arg("--signature").arg(&sig).arg("--out").arg(&bad).output().unwrap();

    let one = dir.path().join("one");
    assert_eq!(code(bin().arg("stats").arg(good.join("result.json")).arg("--out").arg(&one)), 0);
    let runs = std::fs::read_to_string(one.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 2);
    assert!(runs.lines().nth(1).unwrap().ends_with(','), "converged run has no failure: {runs}");

    let mixed = dir.path().join("mixed");
    assert_eq!(
        code(bin().arg("stats").arg(good.join("result.json")).arg(bad.join("result.json")).arg("--out").arg(&mixed)),
        0
    );
    let runs = std::fs::read_to_string(mixed.join("runs.csv")).unwrap();
    let last = runs.lines().nth(2).unwrap();
    assert!(last.contains("MaxIterations"), "{runs}");
    assert!(!last.ends_with(','));
    let hist = std::fs::read_to_string(mixed.join("histogram.csv")).unwrap();
    assert!(hist.starts_with("metric,bin_lo,bin_hi,count"));

    assert_eq!(code(bin().arg("stats").arg(dir.path().join("missing.json"))), 5);
}
