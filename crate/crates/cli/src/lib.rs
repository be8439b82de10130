//! Rational point search, classification of hyperelliptic curves into the
//! four categories, random sampling and batch statistics.

pub mod classify;
pub mod points;
pub mod sample;
pub mod table;

pub use classify::{classify_curve, classify_curve_with, Category, ClassificationResult, SampleConfig, Witness};
pub use points::{first_rational_point, search_rational_points};
pub use sample::{sample_curves, CurveSampler};
pub use table::{emit_report, Aggregate};
