//! Products of disks and annuli: Bergman, `∂M` Hardy and Shilov minima over
//! tensor-product bases, monomial ideals, and the product relations.

mod domain;
mod problems;
mod relations;
mod solve;
mod tensor;

pub use domain::{ideal_staircase, Constraint, Factor, IdealSpec, ProductDomain, StaircaseSets};
pub use problems::{
    bergman_min_product, face_norm_direct, face_norm_gram, hardy_dm_min, hardy_face_min, product_sublevel_integral,
    shilov_min,
};
pub use relations::{
    cor21_bound, jet_exponents, pole_constants, product_split_check, shilov_product, theorem21_relation,
    theorem31_relation, uniform_jet_extension_product, FactorStatements, Normalization, ProductExtensionReport,
    ShilovFactor, SplitReport, SplitSide, Theorem31Report, UniformProductReport,
};
pub use solve::ProductMin;
