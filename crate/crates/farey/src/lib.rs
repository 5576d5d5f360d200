//! Farey fractions under divisibility constraints: exact enumeration,
//! the BCZ map and its cylinder geometry, closed-form limiting gap
//! distributions, empirical gap statistics, and run-length analysis.

pub mod analytic;
pub mod bcz;
pub mod empirical;
pub mod error;
pub mod fraction;
pub mod geometry;
pub mod runs;
pub mod words;

pub use error::FareyError;
pub use fraction::{FareyFilter, FareyFraction};
