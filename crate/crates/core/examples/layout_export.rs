//! End-to-end run on an OBJ file: solve, lay out, and write the report, UV
//! mesh and CSV tables.
//!
//! ```text
//! cargo run --example layout_export -- [mesh.obj] [out-dir]
//! ```
//! Without arguments a torus of revolution is written to a temporary
//! directory and used as input.

use std::path::PathBuf;

use seamless_metric::cli::{run_pipeline, write_outputs, RunConfig, SignatureSource};
use seamless_metric::fixtures;
use seamless_metric::preprocess::PreprocessOptions;
use seamless_metric::solver::SolveOptions;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = std::env::temp_dir().join("seamless-metric-layout");
    let mesh = args.next().map(PathBuf::from).unwrap_or_else(|| {
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("torus.obj");
        let mut obj = String::new();
        for p in fixtures::torus_grid_positions(12, 8, 3.0, 1.0) {
            obj += &format!("v {} {} {}\n", p[0], p[1], p[2]);
        }
        for f in fixtures::torus_grid_faces(12, 8) {
            obj += &format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        std::fs::write(&path, obj).unwrap();
        path
    });
    let out = args.next().map(PathBuf::from).unwrap_or(dir.join("out"));

    let cfg = RunConfig {
        mesh,
        signature: SignatureSource::AutoTrivial,
        solve: SolveOptions::default(),
        preprocess: PreprocessOptions::default(),
        out: Some(out.clone()),
    };
    let run = match run_pipeline(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.code);
        }
    };
    let r = &run.report;
    println!("cones {:?}, loops {:?}", r.input.cones, r.input.loop_targets);
    println!(
        "{:?}: {} iterations, max|F| {:.2e}, rmsre {:.4}, max stretch {:.4}",
        r.status, r.iterations, r.max_residual, r.rmsre, r.max_stretch
    );
    println!(
        "seamlessness: max deviation {:.2e}, cut rotations off quarter turns by {:?}",
        r.seamlessness.max_deviation, r.seamlessness.max_transition_deviation
    );
    write_outputs(&out, &run).expect("writing outputs");
    println!("wrote {}", out.display());
}
