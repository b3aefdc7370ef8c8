//! Command-line driver: `solve`, `validate` and `stats`.
//!
//! Exit codes: 0 success, 2 malformed input, 3 invalid signature, 4 solver
//! failure, 5 I/O.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::holonomy::{validate_signature, DualLoop, HolonomySignature, SignatureFile, ValidationReport};
use crate::io::{read_obj, write_deviation_csv, write_obj_with_uv, write_stretch_csv};
use crate::layout::{
    lay_out, quarter_turn_deviation, rmsre_lambda, seamlessness_report, stretch_lambda,
    transition_rotations, LayoutResult, SeamlessnessReport,
};
use crate::mesh::Mesh;
use crate::metric::{lambda_from_positions, DelaunayOptions};
use crate::preprocess::{interpolate_metric, PreprocessOptions};
use crate::solver::{coordinate_change, newton_solve_with_progress, SolveMode, SolveOptions, SolveResult, SolveStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_SIGNATURE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_IO: i32 = 5;

pub const REPORT_SCHEMA: &str = "v1";

#[derive(Debug, Parser)]
#[command(name = "seamless-metric", version, about = "Metrics with prescribed holonomy on closed triangle meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for a metric satisfying a holonomy signature.
    Solve(SolveArgs),
    /// Check a signature against a mesh.
    Validate(ValidateArgs),
    /// Aggregate `result.json` reports into CSV tables.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Input OBJ mesh.
    #[arg(long)]
    pub mesh: PathBuf,
    /// Signature file, or `auto` (also `auto-trivial`) to round the input angle sums.
    #[arg(long, default_value = "auto")]
    pub signature: String,
    #[arg(long = "eps-c", default_value_t = 1e-10)]
    pub eps_c: f64,
    #[arg(long = "max-iter", default_value_t = 50)]
    pub max_iter: usize,
    /// Minimum triangle angle (radians) for metric interpolation; 0 disables it.
    #[arg(long = "alpha-min", default_value_t = 0.0)]
    pub alpha_min: f64,
    /// Interpolation shrink factor.
    #[arg(long, default_value_t = 0.9)]
    pub interp: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    /// Output directory; nothing is written when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solve even if the signature fails validation.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Full,
    Naive,
    Conformal,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => SolveMode::Full,
            ModeArg::Naive => SolveMode::Naive,
            ModeArg::Conformal => SolveMode::Conformal,
        }
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub mesh: PathBuf,
    /// Signature file, or `auto`.
    #[arg(long, default_value = "auto")]
    pub signature: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// `result.json` files.
    pub reports: Vec<PathBuf>,
    /// Directory for `runs.csv` and `histogram.csv`; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignatureSource {
    AutoTrivial,
    File(PathBuf),
}

impl SignatureSource {
    pub fn parse(s: &str) -> Self {
        if s == "auto" || s == "auto-trivial" {
            SignatureSource::AutoTrivial
        } else {
            SignatureSource::File(PathBuf::from(s))
        }
    }

    fn describe(&self) -> String {
        match self {
            SignatureSource::AutoTrivial => "auto".into(),
            SignatureSource::File(p) => p.display().to_string(),
        }
    }
}

/// Everything one `solve` run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mesh: PathBuf,
    pub signature: SignatureSource,
    pub solve: SolveOptions,
    pub preprocess: PreprocessOptions,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &SolveArgs) -> Self {
        RunConfig {
            mesh: a.mesh.clone(),
            signature: SignatureSource::parse(&a.signature),
            solve: SolveOptions {
                epsilon_c: a.eps_c,
                max_iterations: a.max_iter,
                mode: a.mode.into(),
                allow_invalid_signature: a.force,
                ..Default::default()
            },
            preprocess: PreprocessOptions {
                alpha_min: a.alpha_min,
                beta: a.interp,
                delaunay: DelaunayOptions::default(),
            },
            out: a.out.clone(),
        }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::InvalidSignature(_) => EXIT_INVALID_SIGNATURE,
        Error::LinearSolveFailed(_)
        | Error::LineSearchStalled(_)
        | Error::FlipLimitExceeded(_)
        | Error::InterpolationFailed(_)
        | Error::DegenerateFace(_)
        | Error::DegenerateAngle(_)
        | Error::UnflippableEdge(_)
        | Error::LoopInvalidated(_)
        | Error::NonFiniteCoordinate(_)
        | Error::TriangleInequalityViolated(_) => EXIT_SOLVER,
        _ => EXIT_PARSE,
    }
}

/// Input mesh with its initial metric.
#[derive(Debug, Clone)]
pub struct Input {
    pub mesh: Mesh,
    pub positions: Vec<[f64; 3]>,
    pub lambda: Vec<f64>,
}

pub fn load_input(path: &Path) -> Result<Input, CliError> {
    let obj = read_obj(path)?;
    let mesh = Mesh::from_faces_with_vertex_count(&obj.faces, obj.positions.len())?;
    let lambda = lambda_from_positions(&mesh, &obj.positions)?;
    Ok(Input {
        mesh,
        positions: obj.positions,
        lambda,
    })
}

pub fn load_signature(
    source: &SignatureSource,
    input: &Input,
) -> Result<(HolonomySignature, Vec<DualLoop>), CliError> {
    match source {
        SignatureSource::AutoTrivial => {
            let sig = HolonomySignature::auto_trivial(&input.mesh, &input.lambda)?;
            Ok((sig, crate::holonomy::homology_basis(&input.mesh)))
        }
        SignatureSource::File(p) => Ok(SignatureFile::load(p)?.resolve(&input.mesh)?),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputSummary {
    pub mesh: String,
    pub signature: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub cones: Vec<(usize, i64)>,
    pub loop_targets: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OptionsSummary {
    pub mode: SolveMode,
    pub eps_c: f64,
    pub max_iterations: usize,
    pub alpha_min: f64,
    pub interp: f64,
    pub forced: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub max_residual: f64,
    pub l2_residual: f64,
    pub beta: Option<f64>,
    pub flips: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeamlessnessSummary {
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub dropped_vertex: usize,
    pub dropped_vertex_angle: f64,
    /// Largest distance of a cut-edge rotation from a multiple of π/2.
    pub max_transition_deviation: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub total_seconds: f64,
    pub solve_seconds: f64,
    pub mean_linear_solve_seconds: Option<f64>,
}

/// Contents of `result.json`. Everything outside `timings` is reproducible.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema: String,
    pub input: InputSummary,
    pub options: OptionsSummary,
    pub status: SolveStatus,
    pub message: Option<String>,
    pub iterations: usize,
    pub max_residual: f64,
    pub history: Vec<HistoryEntry>,
    pub preprocess_steps: usize,
    pub flips: usize,
    pub rmsre: f64,
    pub max_stretch: f64,
    pub lambda_change: f64,
    pub seamlessness: SeamlessnessSummary,
    pub timings: Timings,
}

/// A finished `solve` run, before anything is written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub input: Input,
    pub signature: HolonomySignature,
    pub lambda_start: Vec<f64>,
    pub result: SolveResult,
    pub layout: Option<LayoutResult>,
    pub seamlessness: SeamlessnessReport,
    pub report: Report,
}

/// Loads, validates, preprocesses, solves and lays out, as `solve` does.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let input = load_input(&cfg.mesh)?;
    let (signature, loops) = load_signature(&cfg.signature, &input)?;
    let validation = validate_signature(&input.mesh, &signature);
    if !validation.is_valid() {
        if cfg.solve.allow_invalid_signature {
            log::warn!("solving despite invalid signature: {validation}");
        } else {
            return Err(CliError {
                code: EXIT_INVALID_SIGNATURE,
                message: format!("invalid signature: {validation}"),
            });
        }
    }
    let pre = interpolate_metric(&input.mesh, &input.lambda, &cfg.preprocess)?;
    if pre.steps > 0 {
        log::info!("interpolated metric after {} steps, min angle {:.4}", pre.steps, pre.min_angle);
    }
    let solve_start = Instant::now();
    let result = newton_solve_with_progress(&input.mesh, &pre.lambda, &signature, &loops, &cfg.solve, |p| {
        log::info!(
            "iteration {:>3}  max|F| {:.3e}  beta {}  flips {}",
            p.iteration,
            p.max_residual,
            p.beta.map_or("-".to_string(), |b| format!("{b:.3e}")),
            p.flips
        );
    })?;
    let solve_seconds = solve_start.elapsed().as_secs_f64();

    let ev = &result.evaluation;
    let seamlessness = seamlessness_report(&ev.trace.mesh, &ev.constraints, &ev.angles);
    let layout = match lay_out(&ev.trace.mesh, &ev.trace.lambda) {
        Ok(l) => Some(l),
        Err(e) => {
            log::warn!("layout failed: {e}");
            None
        }
    };
    let max_transition_deviation = layout.as_ref().map(|l| {
        transition_rotations(&ev.trace.mesh, l)
            .iter()
            .map(|&(_, r)| quarter_turn_deviation(r))
            .fold(0.0, f64::max)
    });
    let stretch = stretch_lambda(&result.lambda, &input.lambda);
    let linear: Vec<f64> = result.history.iter().filter_map(|h| h.linear_solve_seconds).collect();

    let report = Report {
        schema: REPORT_SCHEMA.into(),
        input: InputSummary {
            mesh: cfg.mesh.display().to_string(),
            signature: cfg.signature.describe(),
            vertices: input.mesh.num_vertices(),
            edges: input.mesh.num_edges(),
            faces: input.mesh.num_faces(),
            genus: input.mesh.genus(),
            cones: signature.cones().collect(),
            loop_targets: signature.loop_k.clone(),
        },
        options: OptionsSummary {
            mode: cfg.solve.mode,
            eps_c: cfg.solve.epsilon_c,
            max_iterations: cfg.solve.max_iterations,
            alpha_min: cfg.preprocess.alpha_min,
            interp: cfg.preprocess.beta,
            forced: cfg.solve.allow_invalid_signature,
        },
        status: result.status,
        message: result.message.clone(),
        iterations: result.iterations,
        max_residual: result.max_residual(),
        history: result
            .history
            .iter()
            .map(|h| HistoryEntry {
                iteration: h.iteration,
                max_residual: h.max_residual,
                l2_residual: h.l2_residual,
                beta: h.beta,
                flips: h.flips,
            })
            .collect(),
        preprocess_steps: pre.steps,
        flips: ev.trace.num_flips(),
        rmsre: rmsre_lambda(&result.lambda, &input.lambda),
        max_stretch: stretch.iter().copied().fold(1.0, f64::max),
        lambda_change: coordinate_change(&result.lambda, &input.lambda),
        seamlessness: SeamlessnessSummary {
            max_deviation: seamlessness.max_deviation,
            mean_deviation: seamlessness.mean_deviation,
            dropped_vertex: seamlessness.dropped_vertex,
            dropped_vertex_angle: seamlessness.dropped_vertex_angle,
            max_transition_deviation,
        },
        timings: Timings {
            total_seconds: start.elapsed().as_secs_f64(),
            solve_seconds,
            mean_linear_solve_seconds: (!linear.is_empty())
                .then(|| linear.iter().sum::<f64>() / linear.len() as f64),
        },
    };
    Ok(RunOutcome {
        input,
        signature,
        lambda_start: pre.lambda,
        result,
        layout,
        seamlessness,
        report,
    })
}

/// Writes `result.json`, `lambda.csv`, `stretch.csv`, `deviations.csv` and
/// (when a layout exists) `layout.obj` into `dir`.
pub fn write_outputs(dir: &Path, run: &RunOutcome) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&run.report).map_err(std::io::Error::other)?;
    fs::write(dir.join("result.json"), json + "\n")?;

    let mesh = &run.input.mesh;
    let mut lam = std::io::BufWriter::new(fs::File::create(dir.join("lambda.csv"))?);
    writeln!(lam, "edge,v0,v1,lambda0,lambda")?;
    for e in 0..mesh.num_edges() {
        let (a, b) = mesh.edge_vertices(e);
        writeln!(lam, "{e},{a},{b},{},{}", run.input.lambda[e], run.result.lambda[e])?;
    }
    lam.flush()?;

    let stretch = stretch_lambda(&run.result.lambda, &run.input.lambda);
    write_stretch_csv(
        std::io::BufWriter::new(fs::File::create(dir.join("stretch.csv"))?),
        &run.input.lambda,
        &run.result.lambda,
        &stretch,
    )?;
    write_deviation_csv(
        std::io::BufWriter::new(fs::File::create(dir.join("deviations.csv"))?),
        &run.seamlessness.rows,
    )?;
    if let Some(layout) = &run.layout {
        write_obj_with_uv(
            std::io::BufWriter::new(fs::File::create(dir.join("layout.obj"))?),
            &run.result.evaluation.trace.mesh,
            Some(&run.input.positions),
            layout,
        )?;
    }
    Ok(())
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32, CliError> {
    let cfg = RunConfig::from_args(args);
    cfg.solve.check()?;
    cfg.preprocess.check()?;
    let run = run_pipeline(&cfg)?;
    if let Some(dir) = &cfg.out {
        write_outputs(dir, &run).map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", dir.display()),
        })?;
    }
    let r = &run.report;
    println!(
        "{:?} after {} iterations, max|F| {:.3e}, rmsre {:.6}, flips {}",
        r.status, r.iterations, r.max_residual, r.rmsre, r.flips
    );
    Ok(if r.status.is_converged() { EXIT_OK } else { EXIT_SOLVER })
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<i32, CliError> {
    let input = load_input(&args.mesh)?;
    let (sig, _) = load_signature(&SignatureSource::parse(&args.signature), &input)?;
    let report: ValidationReport = validate_signature(&input.mesh, &sig);
    if report.is_valid() {
        println!("valid");
        Ok(EXIT_OK)
    } else {
        for r in &report.reasons {
            println!("{r}");
        }
        Ok(EXIT_INVALID_SIGNATURE)
    }
}

/// One row of `runs.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub path: String,
    pub status: SolveStatus,
    pub iterations: usize,
    pub max_residual: f64,
    pub rmsre: f64,
    pub flips: usize,
    pub mean_linear_solve_seconds: Option<f64>,
    pub failure: String,
}

pub fn load_report(path: &Path) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    let report: Report = serde_json::from_str(&text).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    if report.schema != REPORT_SCHEMA {
        return Err(CliError {
            code: EXIT_IO,
            message: format!("{}: unsupported schema {:?}", path.display(), report.schema),
        });
    }
    Ok(report)
}

pub fn run_rows(paths: &[PathBuf]) -> Result<Vec<RunRow>, CliError> {
    if paths.is_empty() {
        return Err(CliError {
            code: EXIT_IO,
            message: "no reports given".into(),
        });
    }
    paths
        .iter()
        .map(|p| {
            let r = load_report(p)?;
            let failure = if r.status.is_converged() {
                String::new()
            } else {
                match &r.message {
                    Some(m) => format!("{:?}: {m}", r.status),
                    None => format!("{:?}", r.status),
                }
            };
            Ok(RunRow {
                path: p.display().to_string(),
                status: r.status,
                iterations: r.iterations,
                max_residual: r.max_residual,
                rmsre: r.rmsre,
                flips: r.flips,
                mean_linear_solve_seconds: r.timings.mean_linear_solve_seconds,
                failure,
            })
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_runs_csv<W: Write>(mut out: W, rows: &[RunRow]) -> std::io::Result<()> {
    writeln!(out, "path,status,iterations,max_residual,rmsre,flips,mean_linear_solve_seconds,failure")?;
    for r in rows {
        writeln!(
            out,
            "{},{:?},{},{},{},{},{},{}",
            csv_field(&r.path),
            r.status,
            r.iterations,
            r.max_residual,
            r.rmsre,
            r.flips,
            r.mean_linear_solve_seconds.map_or(String::new(), |s| s.to_string()),
            csv_field(&r.failure)
        )?;
    }
    Ok(())
}

/// Iteration counts in bins of five, and RMSRE in ten equal bins.
pub fn write_histogram_csv<W: Write>(mut out: W, rows: &[RunRow]) -> std::io::Result<()> {
    writeln!(out, "metric,bin_lo,bin_hi,count")?;
    let max_it = rows.iter().map(|r| r.iterations).max().unwrap_or(0);
    for lo in (0..=max_it).step_by(5) {
        let count = rows.iter().filter(|r| (lo..lo + 5).contains(&r.iterations)).count();
        writeln!(out, "iterations,{lo},{},{count}", lo + 5)?;
    }
    let finite: Vec<f64> = rows.iter().map(|r| r.rmsre).filter(|x| x.is_finite()).collect();
    let top = finite.iter().copied().fold(0.0, f64::max);
    let width = if top > 0.0 { top / 10.0 } else { 1.0 };
    for b in 0..10 {
        let lo = b as f64 * width;
        let hi = lo + width;
        let count = finite
            .iter()
            .filter(|&&x| x >= lo && (x < hi || (b == 9 && x <= hi)))
            .count();
        writeln!(out, "rmsre,{lo},{hi},{count}")?;
    }
    Ok(())
}

pub fn cmd_stats(args: &StatsArgs) -> Result<i32, CliError> {
    let rows = run_rows(&args.reports)?;
    match &args.out {
        Some(dir) => {
            let io = |e: std::io::Error| CliError {
                code: EXIT_IO,
                message: format!("{}: {e}", dir.display()),
            };
            fs::create_dir_all(dir).map_err(io)?;
            write_runs_csv(fs::File::create(dir.join("runs.csv")).map_err(io)?, &rows).map_err(io)?;
            write_histogram_csv(fs::File::create(dir.join("histogram.csv")).map_err(io)?, &rows).map_err(io)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_runs_csv(&mut lock, &rows)?;
            writeln!(lock)?;
            write_histogram_csv(&mut lock, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn write_obj(dir: &Path, name: &str, faces: &[[usize; 3]], pos: &[[f64; 3]]) -> PathBuf {
        let mut s = String::new();
        for p in pos {
            s += &format!("v {} {} {}\n", p[0], p[1], p[2]);
        }
        for f in faces {
            s += &format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        let p = dir.join(name);
        fs::write(&p, s).unwrap();
        p
    }

    fn solve_args(mesh: PathBuf, signature: &str, out: Option<PathBuf>) -> SolveArgs {
        SolveArgs {
            mesh,
            signature: signature.into(),
            eps_c: 1e-10,
            max_iter: 50,
            alpha_min: 0.0,
            interp: 0.9,
            mode: ModeArg::Full,
            out,
            force: false,
        }
    }

    #[test]
    fn tetrahedron_auto_signature_needs_no_iterations() {
        let dir = tempfile::tempdir().unwrap();
        let pos = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let faces = fixtures::tetrahedron().mesh.faces();
        let mesh = write_obj(dir.path(), "tet.obj", &faces, &pos);
        let out = dir.path().join("out");
        let code = cmd_solve(&solve_args(mesh, "auto", Some(out.clone()))).unwrap();
        assert_eq!(code, EXIT_OK);
        let report = load_report(&out.join("result.json")).unwrap();
        assert_eq!(report.iterations, 0);
        assert_eq!(report.status, SolveStatus::Converged);
        for f in ["lambda.csv", "stretch.csv", "deviations.csv", "layout.obj"] {
            assert!(out.join(f).exists(), "{f}");
        }
        let rows = run_rows(&[out.join("result.json")]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].failure.is_empty());
    }

    #[test]
    fn two_cone_torus_exits_with_three() {
        let dir = tempfile::tempdir().unwrap();
        let faces = fixtures::torus_grid_faces(4, 4);
        let mesh = write_obj(dir.path(), "torus.obj", &faces, &fixtures::torus_grid_positions(4, 4, 3.0, 1.0));
        let sig = dir.path().join("sig.toml");
        fs::write(&sig, "[vertices]\ncones = [[0, 3], [5, 5]]\n[loops]\nk = [0, 0]\n").unwrap();
        let err = cmd_solve(&solve_args(mesh.clone(), sig.to_str().unwrap(), None)).unwrap_err();
        assert_eq!(err.code, EXIT_INVALID_SIGNATURE);
        assert!(err.message.contains("KnownInvalid_TwoCone35"));
        let code = cmd_validate(&ValidateArgs {
            mesh,
            signature: sig.to_str().unwrap().into(),
        })
        .unwrap();
        assert_eq!(code, EXIT_INVALID_SIGNATURE);
    }

    #[test]
    fn error_codes() {
        let dir = tempfile::tempdir().unwrap();
        let missing = cmd_solve(&solve_args(dir.path().join("nope.obj"), "auto", None)).unwrap_err();
        assert_eq!(missing.code, EXIT_IO);
        let bad = dir.path().join("bad.obj");
        fs::write(&bad, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        assert_eq!(cmd_solve(&solve_args(bad, "auto", None)).unwrap_err().code, EXIT_PARSE);
        let empty = cmd_stats(&StatsArgs {
            reports: vec![],
            out: None,
        })
        .unwrap_err();
        assert_eq!(empty.code, EXIT_IO);
    }

    #[test]
    fn histogram_counts_every_run() {
        let row = |it: usize, r: f64, st: SolveStatus| RunRow {
            path: "x".into(),
            status: st,
            iterations: it,
            max_residual: 0.0,
            rmsre: r,
            flips: 0,
            mean_linear_solve_seconds: None,
            failure: String::new(),
        };
        let rows = vec![
            row(0, 0.0, SolveStatus::Converged),
            row(7, 0.5, SolveStatus::Converged),
            row(50, 1.0, SolveStatus::MaxIterations),
        ];
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let total = |metric: &str| -> usize {
            text.lines()
                .filter(|l| l.starts_with(metric))
                .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
                .sum()
        };
        assert_eq!(total("iterations"), 3);
        assert_eq!(total("rmsre"), 3);
    }
}
