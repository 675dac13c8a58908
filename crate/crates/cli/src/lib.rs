//! Document formats, reports and the `hyperarea` command-line front end.

pub mod cli;
pub mod docs;
pub mod error;
pub mod manifest;
pub mod report;

pub use cli::run;
