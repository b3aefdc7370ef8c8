//! Newton iteration for the holonomy constraints.

pub mod evaluate;
pub mod line_search;
pub mod linear;
pub mod newton;

pub use evaluate::{constraint_residual, constraint_residual_fixed, Evaluation};
pub use line_search::{line_search, Accepted};
pub use linear::{gram_solve, least_norm_step, GramSolution};
pub use newton::{
    conformal_solve, coordinate_change, newton_solve, newton_solve_with_progress, IterationRecord,
    Progress, SolveMode, SolveOptions, SolveResult, SolveStatus,
};
