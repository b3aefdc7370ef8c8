//! Least-norm Newton iteration on Penner coordinates.

use std::time::Instant;

use nalgebra_sparse::CsrMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{build_constraints, ConstraintSystem, DualLoop, HolonomySignature};
use crate::mesh::Mesh;
use crate::metric::DelaunayOptions;
use crate::solver::evaluate::{constraint_residual, constraint_residual_fixed, Evaluation};
use crate::solver::line_search::line_search;
use crate::solver::linear::{least_norm_step, norm2, norm_max};
use crate::sparse::csr_from_triplets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Newton in Penner coordinates with Delaunay retriangulation at every evaluation.
    #[default]
    Full,
    /// Newton on the input connectivity; fails when a triangle degenerates.
    Naive,
    /// Newton on per-vertex log scale factors, vertex constraints only.
    Conformal,
}

impl std::str::FromStr for SolveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SolveMode::Full),
            "naive" => Ok(SolveMode::Naive),
            "conformal" => Ok(SolveMode::Conformal),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Converged when `max |F| ≤ epsilon_c`.
    pub epsilon_c: f64,
    pub max_iterations: usize,
    pub backtrack_factor: f64,
    pub min_step: f64,
    pub mode: SolveMode,
    pub delaunay: DelaunayOptions,
    /// Diagonal shift (relative to the mean diagonal) used when the Gram
    /// matrix cannot be factored as is.
    pub regularization: f64,
    /// Skip signature validation. Targets are still checked for shape.
    pub allow_invalid_signature: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            epsilon_c: 1e-10,
            max_iterations: 50,
            backtrack_factor: 0.5,
            min_step: 1e-16,
            mode: SolveMode::Full,
            delaunay: DelaunayOptions::default(),
            regularization: 1e-12,
            allow_invalid_signature: false,
        }
    }
}

impl SolveOptions {
    pub fn check(&self) -> Result<()> {
        let ok = self.epsilon_c > 0.0
            && self.min_step > 0.0
            && self.backtrack_factor > 0.0
            && self.backtrack_factor < 1.0
            && self.regularization >= 0.0
            && self.delaunay.epsilon >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("invalid solver options {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    LineSearchStalled,
    LinearSolveFailed,
}

impl SolveStatus {
    pub fn is_converged(self) -> bool {
        self == SolveStatus::Converged
    }
}

/// State at the top of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub residual: Vec<f64>,
    pub max_residual: f64,
    pub l2_residual: f64,
    pub flips: usize,
    /// Accepted step length, `None` on the last record.
    pub beta: Option<f64>,
    pub rejected_steps: usize,
    /// `‖L μ + F‖ / ‖F‖` of the Gram solve.
    pub linear_residual: Option<f64>,
    pub linear_solve_seconds: Option<f64>,
}

/// Passed to the progress callback after every iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub iteration: usize,
    pub max_residual: f64,
    pub beta: Option<f64>,
    pub flips: usize,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Solution on the input connectivity.
    pub lambda: Vec<f64>,
    /// Final evaluation: Delaunay mesh, coordinates, rerouted constraints, angles.
    pub evaluation: Evaluation,
    /// Steps taken.
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    /// Log scale factors, conformal mode only.
    pub scale_factors: Option<Vec<f64>>,
    pub seconds: f64,
    pub message: Option<String>,
}

impl SolveResult {
    pub fn max_residual(&self) -> f64 {
        self.evaluation.max_residual()
    }

    pub fn residual(&self) -> &[f64] {
        &self.evaluation.residual
    }
}

/// Solves for `λ` with `C α(Del(M₀, λ)) = Θ`, starting from `lambda0`.
///
/// Validation failures and problems at the starting point are errors; failures
/// during the iteration are reported through [`SolveResult::status`].
pub fn newton_solve(
    mesh: &Mesh,
    lambda0: &[f64],
    sig: &HolonomySignature,
    loops: &[DualLoop],
    opts: &SolveOptions,
) -> Result<SolveResult> {
    newton_solve_with_progress(mesh, lambda0, sig, loops, opts, |_| {})
}

pub fn newton_solve_with_progress(
    mesh: &Mesh,
    lambda0: &[f64],
    sig: &HolonomySignature,
    loops: &[DualLoop],
    opts: &SolveOptions,
    progress: impl FnMut(&Progress),
) -> Result<SolveResult> {
    opts.check()?;
    let constraints = if opts.allow_invalid_signature {
        ConstraintSystem::assemble(mesh, sig, loops)?
    } else {
        build_constraints(mesh, sig, loops)?
    };
    match opts.mode {
        SolveMode::Full | SolveMode::Naive => solve_lambda(mesh, lambda0, &constraints, opts, progress),
        SolveMode::Conformal => solve_conformal(mesh, lambda0, &constraints, opts, progress),
    }
}

/// Newton on scale factors `u`, `λ = λ⁰ + Bᵀu`, for vertex-only constraints.
pub fn conformal_solve(
    mesh: &Mesh,
    lambda0: &[f64],
    sig: &HolonomySignature,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let opts = SolveOptions {
        mode: SolveMode::Conformal,
        ..*opts
    };
    newton_solve(mesh, lambda0, sig, &[], &opts)
}

fn evaluate(mesh: &Mesh, lambda: &[f64], cs: &ConstraintSystem, opts: &SolveOptions) -> Result<Evaluation> {
    match opts.mode {
        SolveMode::Naive => constraint_residual_fixed(mesh, lambda, cs),
        _ => constraint_residual(mesh, lambda, cs, &opts.delaunay),
    }
}

fn record(iteration: usize, ev: &Evaluation) -> IterationRecord {
    IterationRecord {
        iteration,
        residual: ev.residual.clone(),
        max_residual: ev.max_residual(),
        l2_residual: ev.l2_residual(),
        flips: ev.trace.num_flips(),
        beta: None,
        rejected_steps: 0,
        linear_residual: None,
        linear_solve_seconds: None,
    }
}

/// Shared iteration over an abstract variable `x` with `λ = lift(x)`.
struct Problem<'a, L, J> {
    mesh: &'a Mesh,
    constraints: &'a ConstraintSystem,
    opts: &'a SolveOptions,
    lift: L,
    /// Jacobian of `F` with respect to `x`.
    jacobian: J,
}

impl<L, J> Problem<'_, L, J>
where
    L: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&Evaluation) -> Result<CsrMatrix<f64>>,
{
    fn run(&self, x0: Vec<f64>, mut progress: impl FnMut(&Progress)) -> Result<(SolveStatus, Vec<f64>, Evaluation, Vec<IterationRecord>, Option<String>)> {
        let opts = self.opts;
        let mut x = x0;
        let mut ev = evaluate(self.mesh, &(self.lift)(&x), self.constraints, opts)?;
        let mut history = Vec::new();
        let mut iteration = 0;
        let (status, message) = loop {
            let mut rec = record(iteration, &ev);
            if rec.max_residual <= opts.epsilon_c {
                history.push(rec);
                break (SolveStatus::Converged, None);
            }
            if iteration >= opts.max_iterations {
                history.push(rec);
                break (SolveStatus::MaxIterations, None);
            }
            let jac = match (self.jacobian)(&ev) {
                Ok(j) => j,
                Err(e) => {
                    history.push(rec);
                    break (SolveStatus::LinearSolveFailed, Some(e.to_string()));
                }
            };
            let rhs: Vec<f64> = ev.residual.iter().map(|f| -f).collect();
            let t = Instant::now();
            let step = least_norm_step(&jac, &rhs, opts.regularization);
            rec.linear_solve_seconds = Some(t.elapsed().as_secs_f64());
            let (d, sol) = match step {
                Ok(s) => s,
                Err(e) => {
                    history.push(rec);
                    break (SolveStatus::LinearSolveFailed, Some(e.to_string()));
                }
            };
            rec.linear_residual = Some(sol.relative_residual);
            let search = line_search(&ev.residual, opts.backtrack_factor, opts.min_step, |beta| {
                let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + beta * di).collect();
                let tev = evaluate(self.mesh, &(self.lift)(&trial), self.constraints, opts)?;
                Ok((tev.residual.clone(), (trial, tev)))
            });
            match search {
                Ok(acc) => {
                    rec.beta = Some(acc.beta);
                    rec.rejected_steps = acc.rejected;
                    (x, ev) = acc.payload;
                }
                Err(e) => {
                    history.push(rec);
                    break (SolveStatus::LineSearchStalled, Some(e.to_string()));
                }
            }
            progress(&Progress {
                iteration,
                max_residual: rec.max_residual,
                beta: rec.beta,
                flips: ev.trace.num_flips(),
            });
            log::debug!(
                "iteration {iteration}: max|F| {:.3e}, beta {:?}, flips {}",
                rec.max_residual,
                rec.beta,
                ev.trace.num_flips()
            );
            history.push(rec);
            iteration += 1;
        };

        if status.is_converged() {
            // from-scratch re-evaluation of the returned point
            let check = evaluate(self.mesh, &(self.lift)(&x), self.constraints, opts)?;
            debug_assert!(norm_max(&check.residual) <= opts.epsilon_c);
            ev = check;
        }
        Ok((status, x, ev, history, message))
    }
}

fn solve_lambda(
    mesh: &Mesh,
    lambda0: &[f64],
    constraints: &ConstraintSystem,
    opts: &SolveOptions,
    progress: impl FnMut(&Progress),
) -> Result<SolveResult> {
    let start = Instant::now();
    let problem = Problem {
        mesh,
        constraints,
        opts,
        lift: |x: &[f64]| x.to_vec(),
        jacobian: |ev: &Evaluation| ev.jacobian(),
    };
    let (status, lambda, evaluation, history, message) = problem.run(lambda0.to_vec(), progress)?;
    Ok(SolveResult {
        status,
        lambda,
        evaluation,
        iterations: history.len() - 1,
        history,
        scale_factors: None,
        seconds: start.elapsed().as_secs_f64(),
        message,
    })
}

/// `Bᵀ` restricted to the free vertices: `N_e × (N_v − 1)`, entry 1 where the
/// vertex is an endpoint of the edge (2 for a loop edge).
fn scale_lift_matrix(mesh: &Mesh, dropped: usize) -> CsrMatrix<f64> {
    let col = |v: usize| if v < dropped { Some(v) } else if v == dropped { None } else { Some(v - 1) };
    let mut triplets = Vec::with_capacity(2 * mesh.num_edges());
    for e in 0..mesh.num_edges() {
        let (a, b) = mesh.edge_vertices(e);
        for v in [a, b] {
            if let Some(c) = col(v) {
                triplets.push((e, c, 1.0));
            }
        }
    }
    csr_from_triplets(mesh.num_edges(), mesh.num_vertices() - 1, &triplets)
}

fn solve_conformal(
    mesh: &Mesh,
    lambda0: &[f64],
    constraints: &ConstraintSystem,
    opts: &SolveOptions,
    progress: impl FnMut(&Progress),
) -> Result<SolveResult> {
    if constraints.num_loops() > 0 {
        return Err(Error::InvalidSignature(
            "conformal mode handles vertex constraints only".into(),
        ));
    }
    let start = Instant::now();
    let dropped = constraints.dropped;
    let lift_matrix = scale_lift_matrix(mesh, dropped);
    let edge_ends: Vec<(usize, usize)> = (0..mesh.num_edges()).map(|e| mesh.edge_vertices(e)).collect();
    let expand = |x: &[f64]| -> Vec<f64> {
        let mut u = Vec::with_capacity(x.len() + 1);
        u.extend_from_slice(&x[..dropped]);
        u.push(0.0);
        u.extend_from_slice(&x[dropped..]);
        u
    };
    let lift = |x: &[f64]| -> Vec<f64> {
        let u = expand(x);
        lambda0
            .iter()
            .zip(&edge_ends)
            .map(|(l, &(a, b))| l + u[a] + u[b])
            .collect()
    };
    let problem = Problem {
        mesh,
        constraints,
        opts,
        lift,
        jacobian: |ev: &Evaluation| Ok(&ev.jacobian()? * &lift_matrix),
    };
    let x0 = vec![0.0; mesh.num_vertices() - 1];
    let (status, x, evaluation, history, message) = problem.run(x0, progress)?;
    Ok(SolveResult {
        status,
        lambda: evaluation.lambda.clone(),
        evaluation,
        iterations: history.len() - 1,
        history,
        scale_factors: Some(expand(&x)),
        seconds: start.elapsed().as_secs_f64(),
        message,
    })
}

/// Euclidean distance between two coordinate vectors.
pub fn coordinate_change(a: &[f64], b: &[f64]) -> f64 {
    norm2(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}
