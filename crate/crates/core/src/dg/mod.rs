//! Discrete function space: Cartesian meshes, nodal Gauss-Legendre bases,
//! projection, point evaluation and norms.

mod basis;
mod mesh;
mod norms;
pub mod quadrature;
mod solution;

pub use basis::{NodalBasis, MAX_DEGREE};
pub(crate) use basis::{barycentric_weights, lagrange_values};
pub use mesh::{Mesh1D, Mesh2D};
pub use norms::{convergence_order, l2_difference, l2_error, l2_error_2d_with, l2_error_with};
pub use solution::{eval_at, eval_at_2d, eval_cell, eval_cell_2d, l2_project, l2_project_2d, ElementSolution};

/// Convenience constructor mirroring [`NodalBasis::new`].
pub fn build_basis(degree: usize) -> crate::Result<NodalBasis> {
    NodalBasis::new(degree)
}
