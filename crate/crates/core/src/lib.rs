//! Vibration analysis of an elastic bar with distributed damping, clamped at one
//! end and carrying a spring-mounted mass with velocity feedback at the other.
//!
//! * [`params`]: physical constants and the dimensionless groups every solver uses.
//! * [`conservative`]: natural frequencies of the undamped bar.
//! * [`asymptotic`]: small-dissipation eigenvalue corrections and self-excitation tests.
//! * [`fundsys`]: complex eigenvalues and mode shapes from normal fundamental systems.
//! * [`cli`]: config parsing and CSV reports behind the `flexbar` binary.
//!
//! The numerics are generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! below name the double-precision instantiations used by the CLI.

// Negated comparisons are deliberate: they send NaN down the rejection path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod cli;
pub mod conservative;
pub mod error;
pub mod fundsys;
pub mod params;
pub mod scalar;
pub mod simplex;

pub use asymptotic::{
    BoundaryFrequency, ComplexEigenvalue, CriticalFeedback, ExcitationReport,
    ForcedModeCoefficients,
};
pub use conservative::ConservativeRoot;
pub use error::{Error, Result};
pub use fundsys::{FundamentalMatrix, ModeShape, SearchOptions, SpectralPoint, StateVector};
pub use params::{DimensionlessParams, PhysicalParams, ValidationReport};
pub use scalar::Real;

pub type PhysicalParamsF64 = PhysicalParams<f64>;
pub type DimensionlessParamsF64 = DimensionlessParams<f64>;
pub type ComplexEigenvalueF64 = ComplexEigenvalue<f64>;
pub type FundamentalMatrixF64 = FundamentalMatrix<f64>;
pub type SpectralPointF64 = SpectralPoint<f64>;
pub type ModeShapeF64 = ModeShape<f64>;
pub type SearchOptionsF64 = SearchOptions<f64>;

pub type DimensionlessParamsF32 = DimensionlessParams<f32>;
pub type ComplexEigenvalueF32 = ComplexEigenvalue<f32>;
