//! Single-domain engines: G(t) sweeps, relation checks, equality certificates,
//! extremal functions on the disk, kernel gaps and extension constants.

mod certificate;
mod extension;
mod extremal;
mod gcurve;
mod relation;
mod saitoh;

pub use certificate::{character_defect, distance_to_lattice, equality_certificate, EqualityCertificate};
pub(crate) use extension::random_normal;
pub use extension::{
    extension_bound, interaction_factors, uniform_jet_extension, ExtensionBoundReport, UniformExtensionReport,
};
pub use extremal::{extremal_disk, shell_limit, ExtremalDisk, ExtremalReport, ShellLimitReport};
pub use gcurve::{concavity_report, g_curve, ConcavityReport, GCurve};
pub use relation::{theorem1_relation, RelationReport, Verdict};
pub use saitoh::{saitoh_gap, SaitohReport};
