//! Command-line front end: JSON documents, report rendering and the
//! subcommand implementations.

pub mod app;
pub mod claims;
pub mod document;
pub mod report;
