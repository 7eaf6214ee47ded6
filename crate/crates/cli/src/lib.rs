//! Batch front end for `polyevidence`: CSV ingestion, degree scans, subset
//! searches, simulation and an evidence self-check, each writing a results
//! table, a text report and SVG plots.

// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod plot;
pub mod run;

pub use config::{BasisKind, Mode, RunConfig, ScaleMode, Schema};
pub use error::{CliError, Result};
pub use ingest::{ingest_csv, write_csv, IngestOptions};
pub use run::{run, RunSummary};
