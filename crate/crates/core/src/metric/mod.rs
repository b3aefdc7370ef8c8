//! Discrete metrics in Penner coordinates `λ = 2 log ℓ`.

pub mod angles;
pub mod delaunay;

pub use angles::{angle_gradient, angle_gradient_from, corner_angles, triangle_angles, CornerAngles};
pub use delaunay::{
    delaunay_cosine_sum, diff_make_delaunay, diff_ptolemy_row, is_delaunay, is_delaunay_mesh,
    make_delaunay, make_delaunay_with_loops, ptolemy_flip, ptolemy_lambda, DelaunayOptions,
    FlipTrace, QueueOrder,
};

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Penner coordinates of the metric induced by vertex positions.
pub fn lambda_from_positions(mesh: &Mesh, positions: &[[f64; 3]]) -> Result<Vec<f64>> {
    if positions.len() != mesh.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_vertices(),
            actual: positions.len(),
        });
    }
    (0..mesh.num_edges())
        .map(|e| {
            let (u, v) = mesh.edge_vertices(e);
            let d2: f64 = (0..3).map(|i| (positions[u][i] - positions[v][i]).powi(2)).sum();
            let l = d2.ln();
            if l.is_finite() {
                Ok(l)
            } else {
                Err(Error::NonFiniteCoordinate(e))
            }
        })
        .collect()
}
