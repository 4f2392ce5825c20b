//! Exact integer and mod-2 linear algebra.

mod int_matrix;
mod snf;
mod solve;
mod z2;

pub use int_matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfDecomposition};
pub use solve::{
    integer_solve, integer_solve_with, torus_solution_components, IntegerSolution, TorusComponents,
    TorusSystem,
};
pub use z2::{z2_in_image, z2_rank, z2_solve, BitVec, Z2Matrix, Z2Solution, Z2Span};
