//! File formats, JSON/CSV reports and the verification suite for `pauli-sos`.

pub mod commands;
pub mod config;
pub mod format;
pub mod io;
pub mod report;
pub mod suite;

pub use commands::CliError;
