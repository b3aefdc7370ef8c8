//! Intrinsic metrics with prescribed holonomy on closed triangle meshes.
//!
//! A metric is stored as Penner coordinates `λ = 2 log ℓ`, one per edge of a
//! fixed input connectivity. Angles are always measured on the intrinsic
//! Delaunay triangulation reached by Ptolemy flips, so the constraint map
//! `F(λ) = C α(λ) − Θ` is smooth across flips. [`solver::newton_solve`]
//! drives `F` to zero with least-norm Newton steps.
//!
//! Constraints come from a [`holonomy::HolonomySignature`]: a multiple of π/2
//! for the angle sum at every vertex and for the holonomy of each homology
//! dual loop. A solved metric lays out as a seamless parametrization.
//!
//! ```
//! use seamless_metric::{fixtures, holonomy::HolonomySignature, solver};
//!
//! let fx = fixtures::tetrahedron();
//! let sig = HolonomySignature::new(vec![2; 4], vec![]);
//! let r = solver::newton_solve(&fx.mesh, &fx.lambda, &sig, &[], &Default::default()).unwrap();
//! assert!(r.status.is_converged());
//! assert_eq!(r.iterations, 0);
//! ```
//!
//! Modules, bottom up: [`mesh`] (halfedge connectivity and flips), [`metric`]
//! (angles, Delaunay flips and their Jacobian), [`holonomy`] (dual loops,
//! signatures, constraint matrix), [`solver`], [`preprocess`], [`layout`],
//! [`io`] and [`cli`].

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod holonomy;
pub mod io;
pub mod layout;
pub mod mesh;
pub mod metric;
pub mod preprocess;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
pub use mesh::Mesh;
