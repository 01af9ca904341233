use std::io::Write;
use std::path::Path;

use haarsteg::{
    capacity_bytes, derive_keystream, embed, extract, read_pixmap, read_stego, write_pixmap,
    write_stego, GrayImage, MetricsReport, Mode, PayloadFrame, PayloadKind, Pixmap, Plane,
    StegoContainer, TranslatedImage,
};
use serde::Serialize;

use crate::args::{EmbedArgs, Emit, ExtractArgs, MetricsArgs, VerifyArgs};
use crate::{format_psnr, io_err, read_file, write_file, CliError};

fn load_cover(path: &Path) -> Result<Pixmap, CliError> {
    read_pixmap(&read_file(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_stego(path: &Path) -> Result<TranslatedImage, CliError> {
    let container = read_stego(&read_file(path)?)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(container.into())
}

/// Payload for a secret file: PGM secrets travel as pixel values plus their
/// dimensions, anything else as plain bytes.
fn secret_frame(bytes: Vec<u8>, mode: Mode, as_bytes: bool) -> Result<PayloadFrame, CliError> {
    let image = if as_bytes {
        None
    } else {
        match read_pixmap(&bytes) {
            Ok(Pixmap::Gray(g)) => Some(g),
            _ => None,
        }
    };
    Ok(match (mode, image) {
        (Mode::Raw, Some(g)) => PayloadFrame::raw(g.into_samples()),
        (Mode::Raw, None) => PayloadFrame::raw(bytes),
        (Mode::Framed, Some(g)) => {
            PayloadFrame::framed_image(g.width() as u32, g.height() as u32, g.into_samples())?
        }
        (Mode::Framed, None) => PayloadFrame::framed_bytes(bytes),
    })
}

#[derive(Debug, Serialize)]
struct EmbedReport {
    cover_width: usize,
    cover_height: usize,
    channels: usize,
    beta: i32,
    mode: &'static str,
    payload_bytes: usize,
    capacity_bytes: usize,
    raw_digit_count: Option<usize>,
    mse: f64,
    psnr: Option<f64>,
    fidelity: f64,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Framed => "framed",
        Mode::Raw => "raw",
    }
}

pub fn cmd_embed(args: &EmbedArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cover = load_cover(&args.cover)?;
    let mode: Mode = args.key.mode.into();
    let frame = secret_frame(read_file(&args.secret)?, mode, args.as_bytes)?;
    let capacity = capacity_bytes(cover.width(), cover.height(), cover.channels(), mode);
    let payload_bytes = frame.payload().len();
    if payload_bytes > capacity {
        return Err(CliError::Capacity {
            required: payload_bytes,
            available: capacity,
        });
    }

    let translated = TranslatedImage::from_cover(&cover.planes(), args.beta)?;
    let ks = derive_keystream(args.key.key.as_bytes());
    let stego = embed(&translated, &frame, &ks)?;
    let container = StegoContainer::try_from(&stego)?;
    write_file(&args.out, &write_stego(&container)?)?;

    let m = MetricsReport::between(translated.planes(), stego.planes())?;
    let report = EmbedReport {
        cover_width: cover.width(),
        cover_height: cover.height(),
        channels: cover.channels(),
        beta: args.beta,
        mode: mode_name(mode),
        payload_bytes,
        capacity_bytes: capacity,
        raw_digit_count: (mode == Mode::Raw).then_some(4 * payload_bytes),
        mse: m.mse,
        psnr: m.psnr.is_finite().then_some(m.psnr),
        fidelity: m.fidelity,
    };
    match args.emit {
        Emit::Text => {
            writeln!(
                out,
                "embedded {payload_bytes} of {capacity} bytes ({} mode, beta {})",
                report.mode, args.beta
            )
            .map_err(io_err)?;
            if let Some(n) = report.raw_digit_count {
                writeln!(out, "raw digit count: {n}").map_err(io_err)?;
            }
            writeln!(
                out,
                "MSE {:.6}  PSNR {}  IF {:.6}",
                m.mse,
                format_psnr(m.psnr),
                m.fidelity
            )
            .map_err(io_err)?;
        }
        Emit::Csv => {
            writeln!(out, "payload_bytes,capacity_bytes,mse,psnr,fidelity").map_err(io_err)?;
            writeln!(
                out,
                "{payload_bytes},{capacity},{:.6},{},{:.6}",
                m.mse,
                format_psnr(m.psnr),
                m.fidelity
            )
            .map_err(io_err)?;
        }
        Emit::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn cmd_extract(args: &ExtractArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mode: Mode = args.key.mode.into();
    if mode == Mode::Raw && args.raw_digit_count.is_none() {
        return Err(CliError::Io(
            "raw mode requires --raw-digit-count".to_string(),
        ));
    }
    let stego = load_stego(&args.stego)?;
    let ks = derive_keystream(args.key.key.as_bytes());
    let frame = extract(&stego, &ks, mode, args.raw_digit_count)?;

    let dims = match &frame {
        PayloadFrame::Framed {
            kind: PayloadKind::Image { width, height },
            ..
        } => Some((*width, *height)),
        _ => args.width.zip(args.height),
    };
    let payload = frame.into_payload();
    let len = payload.len();
    let bytes = match dims {
        Some((w, h)) => {
            let img = GrayImage::new(w as usize, h as usize, payload)
                .map_err(|e| CliError::Io(format!("payload does not form a {w}x{h} image: {e}")))?;
            write_pixmap(&Pixmap::Gray(img), false)
        }
        None => payload,
    };
    write_file(&args.out, &bytes)?;
    match dims {
        Some((w, h)) => writeln!(out, "extracted {w}x{h} image ({len} bytes)"),
        None => writeln!(out, "extracted {len} bytes"),
    }
    .map_err(io_err)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let stego = load_stego(&args.stego)?;
    let planes = stego.recover()?;
    let recovered = Pixmap::from_planes(planes)?;
    if let Some(path) = &args.out {
        write_file(path, &write_pixmap(&recovered, false))?;
    }
    writeln!(
        out,
        "cover recovered: {}x{}, {} channel(s)",
        recovered.width(),
        recovered.height(),
        recovered.channels()
    )
    .map_err(io_err)?;

    if let Some(path) = &args.cover {
        let reference = load_cover(path)?;
        if (reference.width(), reference.height(), reference.channels())
            != (recovered.width(), recovered.height(), recovered.channels())
        {
            return Err(CliError::Tampered(format!(
                "recovered cover is {}x{}x{}, reference is {}x{}x{}",
                recovered.width(),
                recovered.height(),
                recovered.channels(),
                reference.width(),
                reference.height(),
                reference.channels()
            )));
        }
        let to_planes =
            |p: &Pixmap| -> Vec<Plane> { p.planes().iter().map(|g| g.to_plane()).collect() };
        let m = MetricsReport::between(&to_planes(&reference), &to_planes(&recovered))?;
        writeln!(out, "MSE {}", m.mse).map_err(io_err)?;
        writeln!(out, "PSNR {}", format_psnr(m.psnr)).map_err(io_err)?;
        if m.mse != 0.0 {
            return Err(CliError::Tampered(
                "recovered cover differs from the reference".to_string(),
            ));
        }
    }
    writeln!(out, "authentic").map_err(io_err)
}

/// Planes of either an 8-bit Netpbm image or a stego container.
fn load_any(path: &Path) -> Result<Vec<Plane>, CliError> {
    let bytes = read_file(path)?;
    let parsed = if haarsteg::is_stego_container(&bytes) {
        read_stego(&bytes).map(StegoContainer::into_planes)
    } else {
        read_pixmap(&bytes).map(|p| p.planes().iter().map(|g| g.to_plane()).collect())
    };
    parsed.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn cmd_metrics(args: &MetricsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let reference = load_any(&args.reference)?;
    let distorted = load_any(&args.distorted)?;
    let m = MetricsReport::between(&reference, &distorted)?;
    match args.emit {
        Emit::Text => writeln!(
            out,
            "MSE {:.6}  PSNR {}  IF {:.6}",
            m.mse,
            format_psnr(m.psnr),
            m.fidelity
        ),
        Emit::Csv => writeln!(
            out,
            "mse,psnr,fidelity\n{:.6},{},{:.6}",
            m.mse,
            format_psnr(m.psnr),
            m.fidelity
        ),
        Emit::Json => writeln!(
            out,
            "{}",
            serde_json::json!({
                "mse": m.mse,
                "psnr": m.psnr.is_finite().then_some(m.psnr),
                "fidelity": m.fidelity,
            })
        ),
    }
    .map_err(io_err)
}
