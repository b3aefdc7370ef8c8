//! The linear map `C` from corner angles to constrained quantities.

use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::holonomy::loops::DualLoop;
use crate::holonomy::signature::{validate_signature, HolonomySignature};
use crate::mesh::Mesh;
use crate::metric::CornerAngles;
use crate::sparse::{csr_from_triplets, csr_mul_vec};

/// `C α = Θ`: one row per vertex except the dropped one, then one row per loop.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub matrix: CsrMatrix<f64>,
    pub theta: Vec<f64>,
    pub loops: Vec<DualLoop>,
    /// Vertex without a row; its angle sum follows from Gauss–Bonnet.
    pub dropped: usize,
    pub num_vertices: usize,
}

/// Builds the system after checking the signature.
pub fn build_constraints(
    mesh: &Mesh,
    sig: &HolonomySignature,
    loops: &[DualLoop],
) -> Result<ConstraintSystem> {
    validate_signature(mesh, sig).into_result()?;
    ConstraintSystem::assemble(mesh, sig, loops)
}

impl ConstraintSystem {
    /// Builds the system without validating the signature beyond its shape.
    pub fn assemble(mesh: &Mesh, sig: &HolonomySignature, loops: &[DualLoop]) -> Result<Self> {
        let nv = mesh.num_vertices();
        if sig.vertex_k.len() != nv {
            return Err(Error::InvalidSignature(format!(
                "{} vertex targets for {nv} vertices",
                sig.vertex_k.len()
            )));
        }
        if sig.loop_k.len() != loops.len() {
            return Err(Error::InvalidSignature(format!(
                "{} loop targets for {} loops",
                sig.loop_k.len(),
                loops.len()
            )));
        }
        if nv == 0 {
            return Err(Error::Empty);
        }
        for l in loops {
            l.validate(mesh)?;
        }
        let dropped = nv - 1;
        let theta = (0..nv)
            .filter(|&v| v != dropped)
            .map(|v| sig.vertex_target(v))
            .chain((0..loops.len()).map(|j| sig.loop_target(j)))
            .collect();
        let loops = loops.to_vec();
        let matrix = assemble_matrix(mesh, &loops, dropped);
        Ok(ConstraintSystem {
            matrix,
            theta,
            loops,
            dropped,
            num_vertices: nv,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.theta.len()
    }

    pub fn num_vertex_rows(&self) -> usize {
        self.num_vertices - 1
    }

    pub fn num_loops(&self) -> usize {
        self.loops.len()
    }

    /// Row of vertex `v`, or `None` for the dropped vertex.
    pub fn vertex_row(&self, v: usize) -> Option<usize> {
        match v.cmp(&self.dropped) {
            std::cmp::Ordering::Less => Some(v),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 1),
        }
    }

    /// The same targets with loops carried to another connectivity of the same surface.
    pub fn with_loops(&self, mesh: &Mesh, loops: Vec<DualLoop>) -> Self {
        let matrix = assemble_matrix(mesh, &loops, self.dropped);
        ConstraintSystem {
            matrix,
            theta: self.theta.clone(),
            loops,
            dropped: self.dropped,
            num_vertices: self.num_vertices,
        }
    }

    /// `C α`
    pub fn apply(&self, angles: &CornerAngles) -> Vec<f64> {
        csr_mul_vec(&self.matrix, &angles.angles)
    }

    /// `C α − Θ`
    pub fn residual(&self, angles: &CornerAngles) -> Vec<f64> {
        self.apply(angles)
            .into_iter()
            .zip(&self.theta)
            .map(|(a, t)| a - t)
            .collect()
    }
}

fn assemble_matrix(mesh: &Mesh, loops: &[DualLoop], dropped: usize) -> CsrMatrix<f64> {
    let nvr = mesh.num_vertices() - 1;
    let mut triplets = Vec::with_capacity(mesh.num_corners());
    for c in 0..mesh.num_corners() {
        let v = mesh.corner_vertex(c);
        if v != dropped {
            let row = if v < dropped { v } else { v - 1 };
            triplets.push((row, c, 1.0));
        }
    }
    for (j, l) in loops.iter().enumerate() {
        for t in l.turns(mesh) {
            triplets.push((nvr + j, t.corner, t.sign as f64));
        }
    }
    csr_from_triplets(nvr + loops.len(), mesh.num_corners(), &triplets)
}
