//! Configuration-driven front end: single analyses, mesh-convergence
//! studies, stress-profile export and reproduction of the reference tables.

pub mod config;
pub mod runs;
pub mod tables;

pub use config::AnalysisConfig;
