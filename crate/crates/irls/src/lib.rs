//! File formats, benchmark harness and command-line front end for
//! [`irls_core`].

pub mod bench;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod stats;

pub use error::{Error, Result};
