//! File formats, reports and the command-line front end for
//! [`photon_certify_core`].

#![forbid(unsafe_code)]

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;
pub mod json;
pub mod report;
pub mod tsv;

pub use error::{CliError, CliResult};
