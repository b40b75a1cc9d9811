//! Experiment driver around `condensation-core`: configuration, reference
//! laws, the experiment suite and its JSON report.

pub mod config;
pub mod dist;
pub mod experiments;
pub mod report;
pub mod tolerances;
