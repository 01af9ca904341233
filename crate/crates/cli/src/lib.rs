//! Command implementations behind the `haarsteg` binary.
//!
//! Every command writes its report to a caller-supplied writer so it can be
//! driven from tests without spawning a process.

mod args;
pub mod bench;
mod commands;

use std::fmt;
use std::io::Write;
use std::path::Path;

pub use args::{
    BenchArgs, Cli, Command, EmbedArgs, Emit, ExtractArgs, KeyArgs, MetricsArgs, ModeArg,
    VerifyArgs,
};
pub use commands::{cmd_embed, cmd_extract, cmd_metrics, cmd_verify};

/// A failed command, carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, malformed file or bad flag combination.
    Io(String),
    Capacity {
        required: usize,
        available: usize,
    },
    NoPayload(String),
    Tampered(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Capacity { .. } => 2,
            CliError::NoPayload(_) => 3,
            CliError::Tampered(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) => f.write_str(msg),
            CliError::Capacity {
                required,
                available,
            } => write!(
                f,
                "payload needs {required} bytes but the cover only holds {available}"
            ),
            CliError::NoPayload(msg) => write!(f, "no payload found: {msg}"),
            CliError::Tampered(msg) => write!(f, "tampered: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<haarsteg::Error> for CliError {
    fn from(e: haarsteg::Error) -> Self {
        use haarsteg::Error as E;
        match e {
            E::CapacityExceeded {
                required,
                available,
            } => CliError::Capacity {
                required: required / 4,
                available: available / 4,
            },
            E::NoPayload(_) => CliError::NoPayload(e.to_string()),
            E::Tampered { .. } => CliError::Tampered(e.to_string()),
            other => CliError::Io(other.to_string()),
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Dispatch a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut sink = std::io::sink();
    let out: &mut dyn Write = if cli.quiet { &mut sink } else { out };
    match cli.command {
        Command::Embed(a) => cmd_embed(&a, out),
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Metrics(a) => cmd_metrics(&a, out),
        Command::Bench(a) => bench::cmd_bench(&a, out),
    }
}

/// Format a PSNR for humans: `INF` for a perfect match.
pub fn format_psnr(psnr: f64) -> String {
    if psnr.is_infinite() {
        "INF".to_string()
    } else {
        format!("{psnr:.6}")
    }
}
