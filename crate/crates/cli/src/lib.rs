//! Config-driven experiment runner behind the `sshqst` binary.

pub mod config;
pub mod output;
pub mod recipes;
pub mod run;
