//! Command-line front end: tracing, fixture scans, verification suites,
//! caustic search and the conjecture table.

pub mod app;
pub mod config;
pub mod error;
pub mod output;
pub mod report;

pub use app::run;
pub use error::CliError;
