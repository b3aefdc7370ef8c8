//! Dual loops, holonomy signatures and the constraint system.

pub mod constraints;
pub mod loops;
pub mod signature;

pub use constraints::{build_constraints, ConstraintSystem};
pub use loops::{homology_basis, DualLoop, TreeCotree, Turn};
pub use signature::{
    required_cone_sum, validate_signature, HolonomySignature, Reason, SignatureFile,
    ValidationReport,
};
