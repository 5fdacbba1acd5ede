//! Library side of the `relcs` command-line tool: report building, sweep
//! evaluation and the verification suite, kept out of `main.rs` so the
//! integration and acceptance tests can drive them directly.

pub mod config;
pub mod report;
pub mod sweep;
pub mod verify;
