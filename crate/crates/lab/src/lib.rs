//! Sweeps, figure presets, CSV tables and the command line of `blockade-lab`.

pub mod cli;
pub mod config;
pub mod correspondence;
pub mod csv_io;
pub mod error;
pub mod presets;
pub mod sweep;

pub use error::{LabError, Result};
