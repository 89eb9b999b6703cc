//! Exact combinatorics, bounds and exhaustive oracles for covering codes in
//! the sum-rank metric.

pub mod bounds;
pub mod exact;
pub mod field;
pub mod geometry;
pub mod matrix;
pub mod oracle;
pub mod params;
pub mod space;

pub use bounds::{compile_report, BoundError, BoundKind, BoundReport, BoundValue};
pub use exact::{ExactError, ExactInt, RealInterval};
pub use params::{CodeParams, ParamError};
pub use space::{BlockVector, Space};
