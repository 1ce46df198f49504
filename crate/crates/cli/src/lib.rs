//! Command-line front end for `chesswit`: parameter and matrix files,
//! JSON reports, and the multi-threaded scan driver.

pub mod cli;
pub mod json;
pub mod params;
pub mod report;
pub mod scan;

pub use cli::{full_help, run, Cli};
