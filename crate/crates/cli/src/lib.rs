//! Command-line front end: ingestion, parameter parsing, dispatch and the
//! JSON result document.

pub mod config;
pub mod document;
pub mod error;
pub mod ingest;
pub mod run;

pub use config::{Format, Objective, RunConfig, Strategy};
pub use document::{revalidate, ResultDocument, SCHEMA};
pub use error::CliError;
pub use ingest::ingest;
pub use run::{run, run_to_string};
