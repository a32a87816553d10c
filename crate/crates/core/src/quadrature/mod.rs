//! Boundary and area quadrature, sublevel regions and integral oracles.

mod area;
mod boundary;
mod coarea;
mod rules;

pub use area::{integrate_area, integrate_samples, AreaGrid, AreaNode, Region};
pub use boundary::{integrate_boundary, BoundaryGrid, BoundaryNode};
pub use coarea::{coarea_check, monomial_sublevel_integral, CoareaReport};
pub use rules::{gauss_legendre, gauss_legendre_on};
