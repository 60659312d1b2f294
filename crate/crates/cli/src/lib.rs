//! Command-line front end: one JSON experiment config in, deterministic
//! reports (JSON + CSV) and self-contained SVG charts out.
//!
//! Exit code contract, stable for scripting:
//! - 0: success.
//! - 1: anything wrong with the inputs: flags, the config document, or
//!   report files handed to `plot`.
//! - 2: failures while running the experiment or writing outputs.

#![forbid(unsafe_code)]

/// Like `println!`, except a failed write is dropped instead of
/// panicking. A consumer that stops reading early (`wmobs run … | head`)
/// closes the pipe; the files being written are the real output, so the
/// remaining progress lines just go nowhere.
#[macro_export]
macro_rules! sayln {
    ($($arg:tt)*) => {{
        use ::std::io::Write as _;
        let _ = writeln!(::std::io::stdout(), $($arg)*);
    }};
}

pub mod commands;
pub mod config;
pub mod plot;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    ReadIo {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteIo {
        path: String,
        source: std::io::Error,
    },
    /// Config-document problems; the message names the offending key.
    #[error("config error: {0}")]
    Schema(String),
    #[error("no reports to plot")]
    EmptyReport,
    #[error("metric {0:?} is not present in every report")]
    MetricMissing(String),
    #[error("run failed: {0}")]
    Runtime(#[from] wmobs_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReadIo { .. }
            | CliError::Schema(_)
            | CliError::EmptyReport
            | CliError::MetricMissing(_) => 1,
            CliError::WriteIo { .. } | CliError::Runtime(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
