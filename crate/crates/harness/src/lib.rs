//! Experiment runner for the `spg-core` solvers: synthetic data, seeded
//! Monte-Carlo ensembles, CSV/JSON output and the `spg` command line.

pub mod cli;
pub mod config;
pub mod data;
pub mod experiments;
pub mod output;
