//! Command line runner and the HTTP session server.

pub mod env;
pub mod server;

pub use env::{solve, Args, LogLevel, Outcome};
