//! Command-line front end for `fptprop`: the instance file format, reports,
//! and the `propagate`, `compare`, `gen-hitting-set` and `bench` verbs.

pub mod app;
pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use error::CliError;
pub use instance::{InstanceFile, Model};
pub use report::{Format, Render};
