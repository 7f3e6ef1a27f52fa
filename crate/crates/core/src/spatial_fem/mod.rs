//! P1 finite elements on structured meshes of `(0,1)` and `(0,1)^2`.
//!
//! Square cells are split along the lower-left to upper-right diagonal.
//! Only interior vertices carry degrees of freedom; Dirichlet boundary
//! rows and columns are removed from the assembled operators.

mod assembly;
mod cg;
mod mesh;
mod projection;
mod sparse;

pub use assembly::{assemble, assemble_full, FemSpace};
pub use cg::{spd_solve, CgSolver, CgStats, CG_TOLERANCE};
pub use mesh::{Dimension, Point, TriMesh};
pub use projection::{
    l2_distance_quadrature, l2_error_against, l2_project, lagrange_interpolate, load_vector, nonlinear_load,
    ritz_project, GridFunction, ScalarField,
};
pub use sparse::SparseSymOperator;
