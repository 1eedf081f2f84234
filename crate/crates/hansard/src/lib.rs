//! File, network and CLI side of the Hansard pipeline. Parsing itself lives
//! in `hansard-core`.

pub mod config;
pub mod fetch;
pub mod fixtures;
pub mod output;
pub mod reference;
pub mod run;

pub use hansard_core as core;
