//! Batch front end: job files, the output bundle and the `construct`,
//! `verify` and `lemma` commands.

pub mod bundle;
pub mod commands;
pub mod error;
pub mod jobspec;

pub use error::CliError;
