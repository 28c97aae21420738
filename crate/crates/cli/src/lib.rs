//! Verification suites, reference data and run reports behind the `relchar` binary.

pub mod goldens;
pub mod report;
pub mod suites;
