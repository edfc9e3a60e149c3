//! Exact `G₂` structure algebra on `ℝ⁷` and its extension to fields on the
//! flat torus `T⁷`.

pub mod decomp;
pub mod field;
pub mod forms;
pub mod structure;

pub use decomp::{in_lambda27, in_lambda7, psi, psi_matrix, rank, Projectors};
pub use field::{dirac_phi_agreement, harmonic_chain, harmonicity_residual, HarmonicChain};
pub use forms::{Form, Scalar};
pub use structure::{
    clifford_relation_violations, cross_identities, cubic_pairing_violations, CrossIdentityReport, G2Spinor,
    G2Structure,
};
