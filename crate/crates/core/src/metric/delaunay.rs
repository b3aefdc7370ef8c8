//! Intrinsic Delaunay flips in Penner coordinates, with the chain-rule Jacobian.

use std::collections::VecDeque;

use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::holonomy::DualLoop;
use crate::mesh::{FlipQuad, Mesh};
use crate::metric::angles::{check_len, corner_angles};
use crate::sparse::{combine_rows, csr_from_rows, SparseRow};

pub const DEFAULT_DELAUNAY_EPSILON: f64 = 1e-12;

/// Flip budget per edge before giving up.
pub const DEFAULT_FLIPS_PER_EDGE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueueOrder {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaunayOptions {
    /// An edge counts as Delaunay when its cosine sum is at least `-epsilon`.
    pub epsilon: f64,
    pub order: QueueOrder,
    pub flips_per_edge: usize,
}

impl Default for DelaunayOptions {
    fn default() -> Self {
        DelaunayOptions {
            epsilon: DEFAULT_DELAUNAY_EPSILON,
            order: QueueOrder::Fifo,
            flips_per_edge: DEFAULT_FLIPS_PER_EDGE,
        }
    }
}

/// `cos α + cos β` for the two angles opposite edge `e`, where `α` sits in the
/// face of `2e` and `β` in the face of `2e + 1`. Non-negative iff `e` is Delaunay.
pub fn delaunay_cosine_sum(mesh: &Mesh, lambda: &[f64], e: usize) -> f64 {
    if !mesh.is_flippable(e) {
        // both opposite corners are base angles of one isosceles triangle
        return 1.0;
    }
    let q = mesh.quad(e);
    let le = lambda[e];
    let side = |a: usize, b: usize| half_cosine(le, lambda[mesh.edge(a)], lambda[mesh.edge(b)]);
    side(q.h1, q.h2) + side(q.t1, q.t2)
}

/// Cosine of the angle opposite the edge with log length `le`.
fn half_cosine(le: f64, la: f64, lb: f64) -> f64 {
    let m = le.max(la).max(lb);
    let (e, a, b) = ((le - m).exp(), (la - m).exp(), (lb - m).exp());
    (a + b - e) / (2.0 * (((la + lb) / 2.0) - m).exp())
}

pub fn is_delaunay(mesh: &Mesh, lambda: &[f64], e: usize, epsilon: f64) -> bool {
    delaunay_cosine_sum(mesh, lambda, e) >= -epsilon
}

pub fn is_delaunay_mesh(mesh: &Mesh, lambda: &[f64], epsilon: f64) -> bool {
    (0..mesh.num_edges()).all(|e| is_delaunay(mesh, lambda, e, epsilon))
}

/// New log length of the diagonal after a flip, by the Ptolemy relation
/// `ℓ_e ℓ_e' = ℓ_a ℓ_c + ℓ_b ℓ_d`, with `a, b` following the old diagonal in
/// one triangle and `c, d` in the other.
pub fn ptolemy_lambda(le: f64, la: f64, lb: f64, lc: f64, ld: f64) -> f64 {
    let x = (la + lc) / 2.0;
    let y = (lb + ld) / 2.0;
    let m = x.max(y);
    2.0 * (m + ((x - m).exp() + (y - m).exp()).ln()) - le
}

/// Partial derivatives of [`ptolemy_lambda`] with respect to `(le, la, lb, lc, ld)`.
pub fn diff_ptolemy_row(le: f64, la: f64, lb: f64, lc: f64, ld: f64) -> [f64; 5] {
    let _ = le;
    let s = (la + lc - lb - ld) / 2.0;
    let wac = logistic(s);
    let wbd = logistic(-s);
    [-1.0, wac, wbd, wac, wbd]
}

fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let t = s.exp();
        t / (1.0 + t)
    }
}

fn quad_lambdas(mesh: &Mesh, lambda: &[f64], q: &FlipQuad) -> [f64; 5] {
    [
        lambda[q.edge],
        lambda[mesh.edge(q.h1)],
        lambda[mesh.edge(q.h2)],
        lambda[mesh.edge(q.t1)],
        lambda[mesh.edge(q.t2)],
    ]
}

/// Flips `e` and replaces its coordinate by the Ptolemy length.
pub fn ptolemy_flip(mesh: &mut Mesh, lambda: &mut [f64], e: usize) -> Result<FlipQuad> {
    if e >= mesh.num_edges() || !mesh.is_flippable(e) {
        return Err(Error::UnflippableEdge(e));
    }
    let [le, la, lb, lc, ld] = quad_lambdas(mesh, lambda, &mesh.quad(e));
    let q = mesh.flip(e)?;
    lambda[e] = ptolemy_lambda(le, la, lb, lc, ld);
    if !lambda[e].is_finite() {
        return Err(Error::NonFiniteCoordinate(e));
    }
    Ok(q)
}

/// Result of a flip sequence to the Delaunay connectivity.
#[derive(Debug, Clone)]
pub struct FlipTrace {
    pub mesh: Mesh,
    pub lambda: Vec<f64>,
    /// Flipped edges in order.
    pub flips: Vec<usize>,
    /// Input loops carried along the flips.
    pub loops: Vec<DualLoop>,
    /// Rows of `∂λ_final/∂λ_initial`, one sparse row per edge, when requested.
    pub jacobian_rows: Option<Vec<SparseRow>>,
}

impl FlipTrace {
    pub fn num_flips(&self) -> usize {
        self.flips.len()
    }

    /// `∂λ_final/∂λ_initial` as an `N_e × N_e` matrix.
    ///
    /// # Panics
    /// If the trace was produced without derivatives.
    pub fn jacobian(&self) -> CsrMatrix<f64> {
        let rows = self
            .jacobian_rows
            .as_ref()
            .expect("trace was computed without derivatives");
        csr_from_rows(self.lambda.len(), rows)
    }
}

pub fn make_delaunay(mesh: &Mesh, lambda: &[f64], opts: &DelaunayOptions) -> Result<FlipTrace> {
    run(mesh, lambda, &[], opts, false)
}

/// Like [`make_delaunay`], also rerouting `loops` through every flip.
pub fn make_delaunay_with_loops(
    mesh: &Mesh,
    lambda: &[f64],
    loops: &[DualLoop],
    opts: &DelaunayOptions,
) -> Result<FlipTrace> {
    run(mesh, lambda, loops, opts, false)
}

/// Like [`make_delaunay_with_loops`], also accumulating `∂λ_final/∂λ_initial`.
pub fn diff_make_delaunay(
    mesh: &Mesh,
    lambda: &[f64],
    loops: &[DualLoop],
    opts: &DelaunayOptions,
) -> Result<FlipTrace> {
    run(mesh, lambda, loops, opts, true)
}

fn run(
    mesh: &Mesh,
    lambda: &[f64],
    loops: &[DualLoop],
    opts: &DelaunayOptions,
    with_jacobian: bool,
) -> Result<FlipTrace> {
    check_len(mesh, lambda)?;
    let mut mesh = mesh.clone();
    let mut lambda = lambda.to_vec();
    let mut loops = loops.to_vec();
    let ne = mesh.num_edges();
    let mut rows: Option<Vec<SparseRow>> =
        with_jacobian.then(|| (0..ne).map(|e| vec![(e, 1.0)]).collect());
    let cap = opts.flips_per_edge.saturating_mul(ne);

    let mut queue: VecDeque<usize> = (0..ne).collect();
    let mut queued = vec![true; ne];
    let mut flips = Vec::new();
    loop {
        let next = match opts.order {
            QueueOrder::Fifo => queue.pop_front(),
            QueueOrder::Lifo => queue.pop_back(),
        };
        let Some(e) = next else { break };
        queued[e] = false;
        if is_delaunay(&mesh, &lambda, e, opts.epsilon) {
            continue;
        }
        if flips.len() >= cap {
            return Err(Error::FlipLimitExceeded(cap));
        }
        let q = mesh.quad(e);
        let [le, la, lb, lc, ld] = quad_lambdas(&mesh, &lambda, &q);
        let edges = [e, mesh.edge(q.h1), mesh.edge(q.h2), mesh.edge(q.t1), mesh.edge(q.t2)];
        ptolemy_flip(&mut mesh, &mut lambda, e)?;
        flips.push(e);

        if let Some(rows) = rows.as_mut() {
            let d = diff_ptolemy_row(le, la, lb, lc, ld);
            let terms: Vec<(f64, &[(usize, f64)])> = edges
                .iter()
                .zip(d)
                .map(|(&k, w)| (w, rows[k].as_slice()))
                .collect();
            let mut new_row = combine_rows(&terms);
            new_row.retain(|&(_, v)| v != 0.0);
            rows[e] = new_row;
        }
        for l in loops.iter_mut() {
            l.reroute_after_flip(&mesh, &q)?;
        }
        for &k in &edges[1..] {
            if !queued[k] {
                queued[k] = true;
                queue.push_back(k);
            }
        }
    }

    corner_angles(&mesh, &lambda)?;
    Ok(FlipTrace {
        mesh,
        lambda,
        flips,
        loops,
        jacobian_rows: rows,
    })
}
