use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::sparse::csr_from_triplets;

/// Cotangents larger than this (in magnitude) mark a degenerate triangle.
pub const MAX_COTANGENT: f64 = 1e14;

/// Corner angles of the current connectivity, indexed by corner `3f + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerAngles {
    pub angles: Vec<f64>,
    pub cotangents: Vec<f64>,
}

impl CornerAngles {
    /// Sum of corner angles at every vertex.
    pub fn vertex_sums(&self, mesh: &Mesh) -> Vec<f64> {
        let mut sums = vec![0.0; mesh.num_vertices()];
        for (c, &a) in self.angles.iter().enumerate() {
            sums[mesh.corner_vertex(c)] += a;
        }
        sums
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Angles and cotangents of a triangle from the logarithmic squared lengths of
/// its edges; entry `i` is opposite edge `i`. Returns `None` when the triangle
/// inequality fails (or holds only with equality).
pub fn triangle_angles(lambda: [f64; 3]) -> Option<([f64; 3], [f64; 3])> {
    let top = lambda.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return None;
    }
    let len = lambda.map(|l| ((l - top) / 2.0).exp());
    let sq = len.map(|l| l * l);

    // Kahan's stable Heron: a >= b >= c
    let mut s = len;
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let area16 = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if !(c - (a - b) > 0.0) || !(area16 > 0.0) {
        return None;
    }
    let area4 = area16.sqrt();

    let mut angles = [0.0; 3];
    let mut cot = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let num = sq[j] + sq[k] - sq[i];
        angles[i] = area4.atan2(num);
        cot[i] = num / area4;
    }
    Some((angles, cot))
}

/// Log lengths of face `f`'s edges ordered to match its corners: entry `s` is
/// the edge opposite corner `3f + s`.
pub(crate) fn face_opposite_lambdas(mesh: &Mesh, lambda: &[f64], f: usize) -> [f64; 3] {
    let [h0, h1, h2] = mesh.face_halfedges(f);
    [
        lambda[mesh.edge(h1)],
        lambda[mesh.edge(h2)],
        lambda[mesh.edge(h0)],
    ]
}

pub fn corner_angles(mesh: &Mesh, lambda: &[f64]) -> Result<CornerAngles> {
    check_len(mesh, lambda)?;
    let mut angles = vec![0.0; mesh.num_corners()];
    let mut cotangents = vec![0.0; mesh.num_corners()];
    for f in 0..mesh.num_faces() {
        let (a, c) = triangle_angles(face_opposite_lambdas(mesh, lambda, f))
            .ok_or(Error::TriangleInequalityViolated(f))?;
        angles[3 * f..3 * f + 3].copy_from_slice(&a);
        cotangents[3 * f..3 * f + 3].copy_from_slice(&c);
    }
    Ok(CornerAngles { angles, cotangents })
}

/// Jacobian of the corner angles with respect to `λ`, a `3N_f × N_e` matrix.
///
/// For a corner `i` with opposite edge `a`, and the other two corners `j, k`
/// opposite edges `b, c`:
/// `∂α_i/∂λ_a = (cot α_j + cot α_k) / 2`, `∂α_i/∂λ_b = -cot α_k / 2`,
/// `∂α_i/∂λ_c = -cot α_j / 2`.
pub fn angle_gradient(mesh: &Mesh, lambda: &[f64]) -> Result<CsrMatrix<f64>> {
    let angles = corner_angles(mesh, lambda)?;
    angle_gradient_from(mesh, &angles)
}

pub fn angle_gradient_from(mesh: &Mesh, angles: &CornerAngles) -> Result<CsrMatrix<f64>> {
    let mut triplets = Vec::with_capacity(9 * mesh.num_faces());
    for f in 0..mesh.num_faces() {
        let [h0, h1, h2] = mesh.face_halfedges(f);
        let opposite = [mesh.edge(h1), mesh.edge(h2), mesh.edge(h0)];
        let cot = &angles.cotangents[3 * f..3 * f + 3];
        if cot.iter().any(|c| !c.is_finite() || c.abs() > MAX_COTANGENT) {
            return Err(Error::DegenerateAngle(f));
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let row = 3 * f + i;
            triplets.push((row, opposite[i], 0.5 * (cot[j] + cot[k])));
            triplets.push((row, opposite[j], -0.5 * cot[k]));
            triplets.push((row, opposite[k], -0.5 * cot[j]));
        }
    }
    Ok(csr_from_triplets(mesh.num_corners(), mesh.num_edges(), &triplets))
}

pub(crate) fn check_len(mesh: &Mesh, lambda: &[f64]) -> Result<()> {
    if lambda.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_edges(),
            actual: lambda.len(),
        });
    }
    if let Some(e) = lambda.iter().position(|l| !l.is_finite()) {
        return Err(Error::NonFiniteCoordinate(e));
    }
    Ok(())
}
