//! Full-capacity distortion benchmark over a directory of covers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use haarsteg::{
    bytes_to_digits, capacity_bytes, derive_keystream, digit_capacity, embed_digits, read_pixmap,
    MetricsReport, Mode, Pixmap, TranslatedImage,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{BenchArgs, Emit};
use crate::{format_psnr, io_err, read_file, write_file, CliError};

pub const CSV_HEADER: &str = "name,mse,psnr,fidelity,capacity_bytes,millis";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub mse: f64,
    /// `None` when the cover came through untouched (infinite PSNR).
    pub psnr: Option<f64>,
    pub fidelity: f64,
    pub capacity_bytes: f64,
    pub millis: f64,
}

fn cover_paths(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(io_err)?.path();
        let is_netpbm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "ppm" | "pnm"));
        if path.is_file() && is_netpbm {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(CliError::Io(format!(
            "no covers found in {}",
            dir.display()
        )));
    }
    paths.sort();
    Ok(paths)
}

/// Secret digits for one cover: the supplied secret truncated to capacity,
/// or a seeded uniform stream filling every slot.
fn secret_digits(secret: Option<&[u8]>, capacity: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    match secret {
        Some(bytes) => {
            let mut digits = bytes_to_digits(bytes);
            digits.truncate(capacity);
            digits
        }
        None => (0..capacity).map(|_| rng.random_range(0..4u8)).collect(),
    }
}

/// Embed into one cover and measure distortion in the translated domain.
pub fn bench_cover(
    name: &str,
    cover: &Pixmap,
    secret: Option<&[u8]>,
    seed: u64,
    key: &str,
    beta: i32,
) -> Result<BenchRow, CliError> {
    let start = Instant::now();
    let translated = TranslatedImage::from_cover(&cover.planes(), beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digits = secret_digits(secret, digit_capacity(&translated), &mut rng);
    let stego = embed_digits(&translated, &digits, &derive_keystream(key.as_bytes()))?;
    let m = MetricsReport::between(translated.planes(), stego.planes())?;
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    Ok(BenchRow {
        name: name.to_string(),
        mse: m.mse,
        psnr: m.psnr.is_finite().then_some(m.psnr),
        fidelity: m.fidelity,
        capacity_bytes: capacity_bytes(cover.width(), cover.height(), cover.channels(), Mode::Raw)
            as f64,
        millis,
    })
}

/// Column means. An infinite PSNR anywhere makes the mean infinite.
pub fn average_row(rows: &[BenchRow]) -> BenchRow {
    let n = rows.len() as f64;
    let mean = |f: &dyn Fn(&BenchRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
    let psnr = rows
        .iter()
        .map(|r| r.psnr)
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.iter().sum::<f64>() / n);
    BenchRow {
        name: "average".to_string(),
        mse: mean(&|r| r.mse),
        psnr,
        fidelity: mean(&|r| r.fidelity),
        capacity_bytes: mean(&|r| r.capacity_bytes),
        millis: mean(&|r| r.millis),
    }
}

fn psnr_cell(p: Option<f64>) -> String {
    format_psnr(p.unwrap_or(f64::INFINITY))
}

pub fn render(rows: &[BenchRow], emit: Emit) -> String {
    let mut out = String::new();
    match emit {
        Emit::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                out.push_str(&format!(
                    "{},{:.6},{},{:.6},{},{:.3}\n",
                    r.name,
                    r.mse,
                    psnr_cell(r.psnr),
                    r.fidelity,
                    r.capacity_bytes,
                    r.millis
                ));
            }
        }
        Emit::Text => {
            out.push_str(&format!(
                "{:<24} {:>10} {:>11} {:>10} {:>14} {:>10}\n",
                "cover", "MSE", "PSNR", "IF", "capacity (B)", "ms"
            ));
            for r in rows {
                out.push_str(&format!(
                    "{:<24} {:>10.6} {:>11} {:>10.6} {:>14} {:>10.3}\n",
                    r.name,
                    r.mse,
                    psnr_cell(r.psnr),
                    r.fidelity,
                    r.capacity_bytes,
                    r.millis
                ));
            }
        }
        Emit::Json => {
            out.push_str(&serde_json::to_string_pretty(rows).expect("rows serialize"));
            out.push('\n');
        }
    }
    out
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let secret = match &args.secret {
        Some(path) => {
            let bytes = read_file(path)?;
            // PGM secrets contribute their pixel values, like `embed` does.
            Some(match read_pixmap(&bytes) {
                Ok(Pixmap::Gray(g)) => g.into_samples(),
                _ => bytes,
            })
        }
        None => None,
    };
    let mut rows = Vec::new();
    for (i, path) in cover_paths(&args.covers)?.iter().enumerate() {
        let cover = read_pixmap(&read_file(path)?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut row = bench_cover(
            &name,
            &cover,
            secret.as_deref(),
            args.seed.wrapping_add(i as u64),
            &args.key,
            args.beta,
        )?;
        if args.no_timing {
            row.millis = 0.0;
        }
        rows.push(row);
    }
    rows.push(average_row(&rows));
    let report = render(&rows, args.emit);
    match &args.out {
        Some(path) => write_file(path, report.as_bytes()),
        None => out.write_all(report.as_bytes()).map_err(io_err),
    }
}
