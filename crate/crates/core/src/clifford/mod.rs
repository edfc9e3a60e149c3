//! Exact Clifford algebra engine: gamma matrices, the map `Φ` from symmetric
//! 2-tensors to twisted spinors, and the `Λ^{0,•}` model for Kähler Ricci-flat
//! geometry.

pub mod calabi_yau;
pub mod exact;
pub mod gamma;

pub use calabi_yau::{cy_clifford_model, CyModel, CyModelReport};
pub use exact::{Gauss, GaussMatrix};
pub use gamma::{
    build_gamma_rep, composite_rotation, exact_inner, phi_map, phi_map_exact, plane_rotation,
    spin_equivariance_residual, GammaRep, Spinor, SymTensor, TwistedSpinor,
};
