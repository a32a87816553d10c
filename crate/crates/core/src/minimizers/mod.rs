//! Truncated-basis Galerkin solves for constrained minimal integrals.

mod basis;
mod gram;
mod jets;
mod problems;
mod solve;

pub use basis::{Basis, BasisKind};
pub use gram::assemble_gram;
pub use jets::{JetPoint, Jets};
pub use problems::{
    area_min, bergman_min, boundary_min, hardy_min, kernel_bergman, kernel_conjugate_hardy, orthogonality_residual,
    MinResult, Settings,
};
pub(crate) use problems::{boundary_chart, chart_for};
pub(crate) use solve::{cholesky, forward};
pub use solve::{least_norm_solve, quadratic_form, Solution};
