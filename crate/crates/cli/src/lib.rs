//! Configuration and output encodings for the `congwb` command-line tool.

pub mod config;
pub mod output;
