//! Configuration, dispatch and CSV output for the `covar-medium` binary.

pub mod commands;
pub mod config;

pub use commands::{run, Command, Outcome, RunOptions};
pub use config::{parse_config, ConfigError, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Io(_) | Self::Runtime(_) => EXIT_RUNTIME,
        }
    }
}
