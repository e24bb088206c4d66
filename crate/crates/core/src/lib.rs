//! Extrinsic geometry of spacelike co-dimension-two submanifolds.
//!
//! The pipeline runs from an ambient metric and an immersion to shape
//! operators in an oriented normal frame, and from there to umbilical
//! directions, pseudo-/ortho-umbilicity, causal character of the umbilical
//! direction and trapped-surface status. On top sit grid scans, locus
//! search and report rendering.

pub mod catalog;
pub mod config;
pub mod dual;
pub mod error;
pub mod extrinsic;
pub mod immersion;
pub mod intrinsic;
pub mod linalg;
pub mod locus;
pub mod metric;
pub mod normal;
pub mod report;
pub mod rootfind;
pub mod scan;
pub mod tolerance;
pub mod umbilic;

pub use catalog::{MetricSpec, SurfaceSpec};
pub use config::{ConfigError, ReportFormat, ScanConfig};
pub use locus::{find_umbilical_locus, LocusError, LocusReport};
pub use scan::{run_scan, ClassificationRecord, ScanReport, ScanSummary};
pub use dual::{DualScalar, Real};
pub use error::{GeometryError, Result};
pub use extrinsic::{ExtrinsicState, NormalVector, Settings};
pub use immersion::Immersion;
pub use linalg::SymmetricOperator;
pub use metric::{ChartPoint, MetricField, Signature};
pub use normal::{NormalFrame, Orientation};
pub use tolerance::Tolerances;
