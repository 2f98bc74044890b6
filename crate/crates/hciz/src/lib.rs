//! Parallel suites, JSON reports and the command-line front end for `hciz-core`.

pub mod cli;
pub mod error;
pub mod par;
pub mod parse;
pub mod report;
pub mod suites;

pub use error::CliError;
pub use report::Report;
