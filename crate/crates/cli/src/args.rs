use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_CODES: &str =
    "Exit codes: 0 success, 1 I/O or usage error, 2 payload exceeds capacity, \
3 no payload found (wrong key or format), 4 stego image failed authentication.";

/// Hide a payload in a 2x Haar-upscaled cover and get both back exactly.
#[derive(Debug, Parser)]
#[command(name = "haarsteg", version, after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Suppress the report printed on stdout.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upscale a cover and embed a secret file into it.
    Embed(EmbedArgs),
    /// Read the secret back out of a stego image.
    Extract(ExtractArgs),
    /// Recover the cover from a stego image and check it is intact.
    Verify(VerifyArgs),
    /// MSE, PSNR and image fidelity between two images.
    Metrics(MetricsArgs),
    /// Embed at full capacity into every cover in a directory and tabulate
    /// the distortion.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeArg {
    #[default]
    Framed,
    Raw,
}

impl From<ModeArg> for haarsteg::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Framed => haarsteg::Mode::Framed,
            ModeArg::Raw => haarsteg::Mode::Raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Emit {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// Secret key selecting the digit order inside each block.
    #[arg(long, short, default_value = "")]
    pub key: String,

    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// 8-bit PGM or PPM cover.
    #[arg(long, short)]
    pub cover: PathBuf,

    /// File to hide. 8-bit PGM secrets are embedded as their pixel values.
    #[arg(long, short)]
    pub secret: PathBuf,

    /// Where to write the 16-bit stego image.
    #[arg(long, short)]
    pub out: PathBuf,

    #[command(flatten)]
    pub key: KeyArgs,

    /// False detail coefficient used for upscaling.
    #[arg(long, short, default_value_t = 0, value_parser = clap::value_parser!(i32).range(0..=255))]
    pub beta: i32,

    /// Embed the secret file's bytes even if it parses as a PGM.
    #[arg(long)]
    pub as_bytes: bool,

    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, short)]
    pub stego: PathBuf,

    /// Where to write the recovered secret.
    #[arg(long, short)]
    pub out: PathBuf,

    #[command(flatten)]
    pub key: KeyArgs,

    /// Number of quaternary digits to read (raw mode only).
    #[arg(long)]
    pub raw_digit_count: Option<usize>,

    /// Wrap a raw payload as a PGM of this width (requires --height).
    #[arg(long, requires = "height")]
    pub width: Option<u32>,

    #[arg(long, requires = "width")]
    pub height: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, short)]
    pub stego: PathBuf,

    /// Original cover to compare the recovered one against.
    #[arg(long, short)]
    pub cover: Option<PathBuf>,

    /// Write the recovered cover here.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Reference image (8-bit Netpbm or stego container).
    #[arg(long, short)]
    pub reference: PathBuf,

    /// Distorted image (8-bit Netpbm or stego container).
    #[arg(long, short)]
    pub distorted: PathBuf,

    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of .pgm/.ppm/.pnm covers.
    #[arg(long, short)]
    pub covers: PathBuf,

    /// Secret to embed (truncated to capacity). Defaults to seeded uniform
    /// random digits filling each cover.
    #[arg(long, short)]
    pub secret: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, short, default_value = "")]
    pub key: String,

    #[arg(long, short, default_value_t = 0, value_parser = clap::value_parser!(i32).range(0..=255))]
    pub beta: i32,

    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,

    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,

    /// Report 0 in the millis column so reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}
