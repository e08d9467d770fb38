//! Command-line front end: report schema, analysis driver and checks.

pub mod analyze;
pub mod check;
pub mod input;
pub mod report;
