//! Quality measures and a planar layout of a solved metric.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::holonomy::ConstraintSystem;
use crate::mesh::Mesh;
use crate::metric::{corner_angles, CornerAngles};

/// Root mean squared relative error `sqrt(mean(((ℓ − ℓ⁰)/ℓ⁰)²))`.
pub fn rmsre(lengths: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(lengths.len(), reference.len(), "length vectors differ in size");
    if lengths.is_empty() {
        return 0.0;
    }
    let sum: f64 = lengths
        .iter()
        .zip(reference)
        .map(|(l, l0)| ((l - l0) / l0).powi(2))
        .sum();
    (sum / lengths.len() as f64).sqrt()
}

/// [`rmsre`] of the lengths `exp(λ/2)` encoded by two coordinate vectors.
pub fn rmsre_lambda(lambda: &[f64], lambda0: &[f64]) -> f64 {
    // (ℓ − ℓ⁰)/ℓ⁰ = exp((λ − λ⁰)/2) − 1
    assert_eq!(lambda.len(), lambda0.len(), "coordinate vectors differ in size");
    if lambda.is_empty() {
        return 0.0;
    }
    let sum: f64 = lambda
        .iter()
        .zip(lambda0)
        .map(|(l, l0)| ((l - l0) / 2.0).exp_m1().powi(2))
        .sum();
    (sum / lambda.len() as f64).sqrt()
}

/// Symmetric per-edge stretch `max(ℓ/ℓ⁰, ℓ⁰/ℓ)`, from coordinates.
pub fn stretch_lambda(lambda: &[f64], lambda0: &[f64]) -> Vec<f64> {
    lambda
        .iter()
        .zip(lambda0)
        .map(|(l, l0)| ((l - l0).abs() / 2.0).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    /// Planar position of every corner `3f + s`.
    pub uv: Vec<[f64; 2]>,
    /// Whether each edge was crossed by the layout tree.
    pub in_tree: Vec<bool>,
    /// Edges not crossed by the layout tree; the surface is cut along them.
    pub cut_edges: Vec<usize>,
    /// Twice the signed area of every laid-out face.
    pub signed_areas: Vec<f64>,
}

impl LayoutResult {
    pub fn corner_uv(&self, c: usize) -> [f64; 2] {
        self.uv[c]
    }
}

/// Unfolds the faces breadth-first from face 0, each new face placed against
/// the edge it shares with its parent.
pub fn lay_out(mesh: &Mesh, lambda: &[f64]) -> Result<LayoutResult> {
    let angles = corner_angles(mesh, lambda)?;
    let len = |h: usize| (lambda[mesh.edge(h)] / 2.0).exp();
    let nf = mesh.num_faces();
    let mut uv = vec![[0.0; 2]; mesh.num_corners()];
    let mut placed = vec![false; nf];
    let mut in_tree = vec![false; mesh.num_edges()];

    let place = |uv: &mut Vec<[f64; 2]>, h: usize, a: [f64; 2], b: [f64; 2]| {
        // tail of h at a, head at b, third corner counterclockwise
        let f = mesh.face(h);
        let n = mesh.next(h);
        let p = mesh.prev(h);
        let theta = angles.angles[mesh.tail_corner(h)];
        let d = [b[0] - a[0], b[1] - a[1]];
        let dl = d[0].hypot(d[1]);
        let r = len(p) / dl;
        let (s, c) = theta.sin_cos();
        let third = [a[0] + r * (c * d[0] - s * d[1]), a[1] + r * (s * d[0] + c * d[1])];
        uv[mesh.tail_corner(h)] = a;
        uv[mesh.tail_corner(n)] = b;
        uv[mesh.tail_corner(p)] = third;
        debug_assert_eq!(mesh.face(n), f);
    };

    if nf > 0 {
        let h0 = mesh.face_halfedge(0);
        place(&mut uv, h0, [0.0, 0.0], [len(h0), 0.0]);
        placed[0] = true;
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for h in mesh.face_halfedges(f) {
            let t = mesh.twin(h);
            let g = mesh.face(t);
            if placed[g] {
                continue;
            }
            // t runs from head(h) to tail(h)
            let a = uv[mesh.tail_corner(mesh.next(h))];
            let b = uv[mesh.tail_corner(h)];
            place(&mut uv, t, a, b);
            placed[g] = true;
            in_tree[mesh.edge(h)] = true;
            queue.push_back(g);
        }
    }

    let signed_areas: Vec<f64> = (0..nf)
        .map(|f| {
            let [p, q, r] = [uv[3 * f], uv[3 * f + 1], uv[3 * f + 2]];
            (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        })
        .collect();
    if let Some(f) = signed_areas.iter().position(|&a| !(a > 0.0)) {
        return Err(Error::DegenerateFace(f));
    }
    let cut_edges = (0..mesh.num_edges()).filter(|&e| !in_tree[e]).collect();
    Ok(LayoutResult {
        uv,
        in_tree,
        cut_edges,
        signed_areas,
    })
}

/// Rotation between the two copies of every cut edge, in `(−π, π]`.
pub fn transition_rotations(mesh: &Mesh, layout: &LayoutResult) -> Vec<(usize, f64)> {
    layout
        .cut_edges
        .iter()
        .map(|&e| {
            let h = 2 * e;
            let t = h + 1;
            let vec_of = |x: usize| {
                let a = layout.uv[mesh.tail_corner(x)];
                let b = layout.uv[mesh.tail_corner(mesh.next(x))];
                [b[0] - a[0], b[1] - a[1]]
            };
            let u = vec_of(h);
            let w = vec_of(t);
            let w = [-w[0], -w[1]];
            let cross = u[0] * w[1] - u[1] * w[0];
            let dot = u[0] * w[0] + u[1] * w[1];
            (e, cross.atan2(dot))
        })
        .collect()
}

/// Distance from `x` to the nearest multiple of `π/2`.
pub fn quarter_turn_deviation(x: f64) -> f64 {
    (x - (x / FRAC_PI_2).round() * FRAC_PI_2).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintDeviation {
    /// `"vertex"` or `"loop"`.
    pub kind: &'static str,
    pub index: usize,
    pub target: f64,
    pub achieved: f64,
}

impl ConstraintDeviation {
    pub fn deviation(&self) -> f64 {
        (self.achieved - self.target).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeamlessnessReport {
    pub rows: Vec<ConstraintDeviation>,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub dropped_vertex: usize,
    pub dropped_vertex_angle: f64,
}

/// Realized angle sums and loop holonomies against their targets.
pub fn seamlessness_report(mesh: &Mesh, constraints: &ConstraintSystem, angles: &CornerAngles) -> SeamlessnessReport {
    let achieved = constraints.apply(angles);
    let nvr = constraints.num_vertex_rows();
    let rows: Vec<ConstraintDeviation> = achieved
        .iter()
        .zip(&constraints.theta)
        .enumerate()
        .map(|(r, (&a, &t))| {
            let (kind, index) = if r < nvr {
                ("vertex", if r < constraints.dropped { r } else { r + 1 })
            } else {
                ("loop", r - nvr)
            };
            ConstraintDeviation {
                kind,
                index,
                target: t,
                achieved: a,
            }
        })
        .collect();
    let devs: Vec<f64> = rows.iter().map(ConstraintDeviation::deviation).collect();
    let max_deviation = devs.iter().copied().fold(0.0, f64::max);
    let mean_deviation = if devs.is_empty() {
        0.0
    } else {
        devs.iter().sum::<f64>() / devs.len() as f64
    };
    SeamlessnessReport {
        rows,
        max_deviation,
        mean_deviation,
        dropped_vertex: constraints.dropped,
        dropped_vertex_angle: angles.vertex_sums(mesh)[constraints.dropped],
    }
}
