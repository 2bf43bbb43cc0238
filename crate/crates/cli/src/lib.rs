//! Command-line harness around the `born-hierarchy` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
