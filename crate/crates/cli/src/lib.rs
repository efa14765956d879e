//! Library half of the `matroidwb` command-line workbench.

pub use matroidwb_core as core;

pub mod census;
pub mod check;
pub mod cli;
pub mod config;
pub mod construct;
pub mod error;
pub mod io;
pub mod paper;
pub mod report;
