//! File formats, command-line driver and benchmark harness for the
//! `pdim-core` encoders.

pub mod bench;
pub mod cli;
pub mod formats;
pub mod json;
pub mod mols_io;

pub use cli::{run, run_from_args, RunConfig};
