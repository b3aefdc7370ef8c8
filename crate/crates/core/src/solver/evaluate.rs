//! The constraint function `F(λ) = C α(Del(M₀, λ)) − Θ` and its Jacobian.

use nalgebra_sparse::CsrMatrix;

use crate::error::Result;
use crate::holonomy::ConstraintSystem;
use crate::mesh::Mesh;
use crate::metric::angles::check_len;
use crate::metric::{angle_gradient_from, corner_angles, diff_make_delaunay, CornerAngles, DelaunayOptions, FlipTrace};
use crate::solver::linear::{norm2, norm_max};
use crate::sparse::csr_from_rows;

/// `F` at one point, with everything needed to differentiate it.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The evaluation point, on the reference connectivity.
    pub lambda: Vec<f64>,
    pub residual: Vec<f64>,
    /// Delaunay connectivity and coordinates for `lambda`, with `∂λ̃/∂λ`.
    pub trace: FlipTrace,
    /// Constraints carried to `trace.mesh`.
    pub constraints: ConstraintSystem,
    pub angles: CornerAngles,
}

impl Evaluation {
    pub fn max_residual(&self) -> f64 {
        norm_max(&self.residual)
    }

    pub fn l2_residual(&self) -> f64 {
        norm2(&self.residual)
    }

    /// `∇F = C ∇α D`, an `N_rows × N_e` matrix.
    pub fn jacobian(&self) -> Result<CsrMatrix<f64>> {
        let grad = angle_gradient_from(&self.trace.mesh, &self.angles)?;
        let d = csr_from_rows(
            self.lambda.len(),
            self.trace
                .jacobian_rows
                .as_ref()
                .expect("evaluations always carry derivatives"),
        );
        Ok(&(&self.constraints.matrix * &grad) * &d)
    }
}

/// Evaluates `F` after making the metric Delaunay. `constraints` live on `mesh`.
pub fn constraint_residual(
    mesh: &Mesh,
    lambda: &[f64],
    constraints: &ConstraintSystem,
    opts: &DelaunayOptions,
) -> Result<Evaluation> {
    let trace = diff_make_delaunay(mesh, lambda, &constraints.loops, opts)?;
    let constraints = constraints.with_loops(&trace.mesh, trace.loops.clone());
    let angles = corner_angles(&trace.mesh, &trace.lambda)?;
    let residual = constraints.residual(&angles);
    Ok(Evaluation {
        lambda: lambda.to_vec(),
        residual,
        trace,
        constraints,
        angles,
    })
}

/// Evaluates `F` on the reference connectivity without flipping; fails when a
/// triangle inequality is violated.
pub fn constraint_residual_fixed(
    mesh: &Mesh,
    lambda: &[f64],
    constraints: &ConstraintSystem,
) -> Result<Evaluation> {
    check_len(mesh, lambda)?;
    let angles = corner_angles(mesh, lambda)?;
    let residual = constraints.residual(&angles);
    let trace = FlipTrace {
        mesh: mesh.clone(),
        lambda: lambda.to_vec(),
        flips: Vec::new(),
        loops: constraints.loops.clone(),
        jacobian_rows: Some((0..lambda.len()).map(|e| vec![(e, 1.0)]).collect()),
    };
    Ok(Evaluation {
        lambda: lambda.to_vec(),
        residual,
        trace,
        constraints: constraints.clone(),
        angles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::holonomy::{homology_basis, HolonomySignature};
    use crate::sparse::to_dense;
    use std::f64::consts::PI;

    #[test]
    fn satisfied_fixtures_have_zero_residual() {
        let fx = fixtures::tetrahedron();
        let cs = ConstraintSystem::assemble(&fx.mesh, &HolonomySignature::new(vec![2; 4], vec![]), &[]).unwrap();
        let ev = constraint_residual(&fx.mesh, &fx.lambda, &cs, &DelaunayOptions::default()).unwrap();
        assert!(ev.max_residual() < 1e-12);
        assert_eq!(ev.trace.num_flips(), 0);

        let fx = fixtures::torus_grid(2, 2);
        let loops = homology_basis(&fx.mesh);
        let cs = ConstraintSystem::assemble(&fx.mesh, &HolonomySignature::flat(&fx.mesh), &loops).unwrap();
        let ev = constraint_residual(&fx.mesh, &fx.lambda, &cs, &DelaunayOptions::default()).unwrap();
        assert!(ev.max_residual() < 1e-12);
    }

    #[test]
    fn octahedron_residual() {
        let fx = fixtures::octahedron();
        let sig = HolonomySignature::new(vec![1, 1, 1, 1, 1, 3], vec![]);
        let cs = ConstraintSystem::assemble(&fx.mesh, &sig, &[]).unwrap();
        let ev = constraint_residual(&fx.mesh, &fx.lambda, &cs, &DelaunayOptions::default()).unwrap();
        assert_eq!(ev.residual.len(), 5);
        for r in &ev.residual {
            assert!((r - 5.0 * PI / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_rows_are_gauge_invariant() {
        let fx = fixtures::sheared_torus(4, 3, 1.7, 0.5);
        let loops = homology_basis(&fx.mesh);
        let cs = ConstraintSystem::assemble(&fx.mesh, &HolonomySignature::flat(&fx.mesh), &loops).unwrap();
        let ev = constraint_residual(&fx.mesh, &fx.lambda, &cs, &DelaunayOptions::default()).unwrap();
        assert!(ev.trace.num_flips() > 0);
        for row in to_dense(&ev.jacobian().unwrap()) {
            assert!(row.iter().sum::<f64>().abs() < 1e-9);
        }
        let shifted: Vec<f64> = fx.lambda.iter().map(|l| l + 3.0).collect();
        let ev2 = constraint_residual(&fx.mesh, &shifted, &cs, &DelaunayOptions::default()).unwrap();
        for (a, b) in ev.residual.iter().zip(&ev2.residual) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
