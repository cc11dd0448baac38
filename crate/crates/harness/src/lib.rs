//! Command-line driver, statistics and acceptance suite for `ipkit-core`.

pub mod acceptance;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod records;
pub mod stats;
