//! Companion crate to `stopset-core`: matrix file formats, JSON and CSV
//! reports, thread-parallel enumeration and the `stopset` command-line tool.

pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;

pub use error::{Error, Result};
