//! File formats, tabular output, threaded drivers and the command-line
//! interface for `ude-core`.

pub mod cli;
pub mod error;
pub mod figures;
pub mod matrix_io;
pub mod parallel;
pub mod table;

pub use error::{Error, Result};
