//! Warped products `(1 − 2m(r)/r)⁻¹dr² + r²ds²_{S²} + g(r)` on `R³ × M`.

pub mod construct;
pub mod descriptor;
pub mod fiber;
pub mod mass;
pub mod metric;
pub mod oracle;

pub use construct::{
    admissibility_check, bound_terms, construct_locsta, construct_locsta_with, cor_infsta, cor_infsta_with,
    mass_and_order, positivity_scan, scalar_lower_bound, AdmissibilityReport, BoundValue, Construction, EpsilonStep,
    InfstaResult, LowerBound, MassOrder, ScanOptions, ScanResult, ScanSample, COND_BOUND,
};
pub use descriptor::{oracle_csv, oracle_rows, BuildSummary, Built, OracleRow, WarpedDescriptor};
pub use fiber::{FiberFamily, FiberJet, FiberShape};
pub use mass::{ConstructionProfile, MassProfile, MassValue, Schedule};
pub use metric::{warped_ricci, warped_scalar, WarpedMetric, WarpedRicci};
pub use oracle::{fd_curvature_oracle, FdSteps, OracleEstimate};
