//! File formats, configuration, the worker pool and command execution for the
//! `eemit` command-line tool. The numerics live in `eemit-core`.

pub mod config;
pub mod output;
pub mod pool;
pub mod repro;
pub mod run;

pub use config::{parse_config, Config, ConfigError, Pairs};
pub use pool::Pool;
pub use run::{run, Command, Report, RunError, RunOptions};
