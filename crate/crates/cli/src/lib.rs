//! Library side of the `rotorsim` command-line tool: scenario configuration,
//! CSV output and the subcommands.

pub mod commands;
pub mod config;
pub mod csv;
