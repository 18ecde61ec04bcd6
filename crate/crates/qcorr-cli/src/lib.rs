//! IO companion for the qcorr toolkit: file formats (states, correlation
//! tables, outcome distributions) and the `qcorr` command-line interface.

pub mod commands;
pub mod distio;
pub mod jsonfmt;
pub mod statefile;
pub mod tablefile;

pub use commands::{dispatch, Cli};
