//! Configuration-driven runner around `freelunch-core`: experiment dispatch,
//! deterministic report files, and the acceptance checklist.

pub mod acceptance;
pub mod config;
pub mod runner;
