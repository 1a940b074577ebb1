//! Submeasures and their `F_σ` ideals, the uniform extractors, closed
//! families with `↓K`, and the branch almost-disjoint family.

pub mod almost_disjoint;
pub mod closed;
pub mod extract;
pub mod sequences;
pub mod submeasure;

pub use almost_disjoint::{branch_ad, prefix_code};
pub use closed::{
    cover_decompose, down_member, ClosedFamilyTree, FnClosedFamily, HomOfPairColoring, PairColoring, SubsetsOf,
};
pub use extract::{diagonalize, diagonalize_finite, f_select, g_select, uniform_p, uniform_q, uniform_selective};
pub use sequences::{DecreasingSeq, PartitionSeq};
pub use submeasure::{
    by_name, phi_prefix, validate, REGISTERED, AxiomViolation, Counting, ExtRational, FnSubmeasure, MaxId, Submeasure, Summable,
};
