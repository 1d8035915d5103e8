//! Command-line front end: b-file ingestion, verification sweeps and JSON
//! reports.

pub mod bfile;
pub mod commands;
pub mod report;
pub mod suites;
