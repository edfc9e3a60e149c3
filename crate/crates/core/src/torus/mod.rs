//! Spectral tensor calculus on flat tori.

pub mod calculus;
pub mod cy;
pub mod field;
pub mod flat;
pub mod grid;
pub mod lambda;
pub mod metric;
pub mod spectrum;

pub use calculus::{linearization_check, linearized_formulas, LinearizationReport, Linearized};
pub use field::{FourierField, FourierScalarField, FourierSymTensor, Mode};
pub use grid::Grid;
pub use metric::{metric_curvature, FourierMetric, GridGeometry, GridMetric};
pub use spectrum::{tt_spectrum, SpectrumLevel, TorusDescriptor};
