//! File formats, parallel sensitivity maps and the command-line front end
//! around [`regomax_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod manifest;
pub mod parallel;
pub mod published;
pub mod registry_io;

pub use error::{Error, Result};
