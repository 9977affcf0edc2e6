//! Verification suites and reporting for `sdg-core`, shared by the `sdg`
//! binary and the acceptance tests.

pub mod config;
pub mod demo;
pub mod report;
pub mod suites;

pub use config::{Suite, SuiteConfig};
pub use report::{CheckRecord, Report, Status};
