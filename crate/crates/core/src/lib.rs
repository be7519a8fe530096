//! Curvilinear regression toolkit: OLS fits with user-friendly parameters,
//! analytic and case-resampling bootstrap confidence intervals, confidence
//! levels for shape hypotheses, and confidence-band figures.
//!
//! The numerical core ([`ols`], [`tdist`], [`interpret`] and the percentile
//! arithmetic in [`bootstrap`]) is generic over [`Scalar`], implemented for
//! `f32` and `f64`. Data ingestion, resampling, synthesis and rendering work
//! in `f64`; the aliases below name the concrete types used there.

pub mod bootstrap;
pub mod dataset;
pub mod error;
pub mod figures;
pub mod interpret;
mod linalg;
pub mod ols;
pub mod scalar;
pub mod stats;
pub mod synth_oracle;
pub mod tdist;

pub use bootstrap::{BootstrapRun, ResamplePlan};
pub use dataset::{ColumnSummary, Dataset, ModelSpec, OfficeRecord};
pub use error::{Error, ErrorKind, Result};
pub use interpret::Shape;
pub use scalar::Scalar;

/// Design matrix in double precision.
pub type Design = dataset::DesignMatrix<f64>;
/// Design matrix in single precision.
pub type Design32 = dataset::DesignMatrix<f32>;
/// Regression fit in double precision.
pub type Fit = ols::FitResult<f64>;
/// Regression fit in single precision.
pub type Fit32 = ols::FitResult<f32>;
/// Confidence interval in double precision.
pub type Interval = ols::Interval<f64>;
/// Curve summary in double precision.
pub type Curve = interpret::CurveSummary<f64>;
/// Rendered friendly table in double precision.
pub type Table = interpret::FriendlyTable<f64>;
