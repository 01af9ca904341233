//! Netpbm input and output.
//!
//! Covers and secrets are 8-bit PGM (`P2`/`P5`) or PPM (`P3`/`P6`) files.
//! Stego images are stored in a 16-bit binary PGM/PPM whose samples carry a
//! fixed bias of [`STEGO_BIAS`], so negative translated samples survive the
//! trip through an unsigned raster.

use crate::error::{Error, Result};
use crate::plane::Plane;

/// Offset added to every translated sample before it is written as `u16`.
pub const STEGO_BIAS: i32 = 512;

const STEGO_MAXVAL: u32 = 65535;
const STEGO_COMMENT: &str = "# WASTIR bias=512";

/// An 8-bit single-channel image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::TruncatedRaster {
                expected: width * height,
                found: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.samples[row * self.width + col]
    }

    pub fn to_plane(&self) -> Plane {
        Plane::new(
            self.width,
            self.height,
            self.samples.iter().map(|&s| i32::from(s)).collect(),
        )
        .expect("gray image dimensions are already validated")
    }
}

/// An 8-bit RGB image held as three separate planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorImage {
    planes: [GrayImage; 3],
}

impl ColorImage {
    pub fn new(red: GrayImage, green: GrayImage, blue: GrayImage) -> Result<Self> {
        let dims = |p: &GrayImage| (p.width, p.height, 1);
        for other in [&green, &blue] {
            if dims(other) != dims(&red) {
                return Err(Error::DimensionMismatch {
                    left: dims(&red),
                    right: dims(other),
                });
            }
        }
        Ok(Self {
            planes: [red, green, blue],
        })
    }

    pub fn width(&self) -> usize {
        self.planes[0].width
    }

    pub fn height(&self) -> usize {
        self.planes[0].height
    }

    pub fn planes(&self) -> &[GrayImage; 3] {
        &self.planes
    }

    pub fn into_planes(self) -> [GrayImage; 3] {
        self.planes
    }
}

/// A decoded 8-bit Netpbm image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pixmap {
    Gray(GrayImage),
    Color(ColorImage),
}

impl Pixmap {
    pub fn width(&self) -> usize {
        match self {
            Pixmap::Gray(g) => g.width(),
            Pixmap::Color(c) => c.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Pixmap::Gray(g) => g.height(),
            Pixmap::Color(c) => c.height(),
        }
    }

    pub fn channels(&self) -> usize {
        match self {
            Pixmap::Gray(_) => 1,
            Pixmap::Color(_) => 3,
        }
    }

    /// Planes in processing order (R, G, B for color).
    pub fn planes(&self) -> Vec<&GrayImage> {
        match self {
            Pixmap::Gray(g) => vec![g],
            Pixmap::Color(c) => c.planes().iter().collect(),
        }
    }

    pub fn from_planes(mut planes: Vec<GrayImage>) -> Result<Self> {
        match planes.len() {
            1 => Ok(Pixmap::Gray(planes.remove(0))),
            3 => {
                let blue = planes.pop().unwrap();
                let green = planes.pop().unwrap();
                let red = planes.pop().unwrap();
                Ok(Pixmap::Color(ColorImage::new(red, green, blue)?))
            }
            n => Err(Error::MalformedHeader(format!(
                "{n} planes cannot form a Netpbm image"
            ))),
        }
    }
}

/// Biased 16-bit raster holding a translated (possibly embedded) image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StegoContainer {
    width: usize,
    height: usize,
    planes: Vec<Plane>,
}

impl StegoContainer {
    pub fn new(planes: Vec<Plane>) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::MalformedHeader("container needs at least one plane".into()))?;
        let (width, height) = (first.width(), first.height());
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::MalformedHeader(format!(
                "container must have 1 or 3 planes, got {}",
                planes.len()
            )));
        }
        for p in &planes {
            if (p.width(), p.height()) != (width, height) {
                return Err(Error::DimensionMismatch {
                    left: (width, height, 1),
                    right: (p.width(), p.height(), 1),
                });
            }
        }
        first.require_even()?;
        for p in &planes {
            if let Some(&value) = p.samples().iter().find(|&&v| !storable(v)) {
                return Err(Error::ContainerOverflow { value });
            }
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channel_count(&self) -> usize {
        self.planes.len()
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.planes
    }
}

fn storable(v: i32) -> bool {
    (0..=STEGO_MAXVAL as i32).contains(&(v + STEGO_BIAS))
}

/// Raw header fields plus the offset at which the raster starts.
struct Header {
    magic: u8,
    width: usize,
    height: usize,
    maxval: u32,
    raster_start: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("{what} does not fit in 32 bits")))
    }
}

fn read_header(bytes: &[u8]) -> Result<Header> {
    let magic = match bytes {
        [b'P', m @ (b'2' | b'3' | b'5' | b'6'), ..] => *m - b'0',
        _ => return Err(Error::MalformedHeader("missing P2/P3/P5/P6 magic".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.next_uint("width")? as usize;
    let height = cur.next_uint("height")? as usize;
    let maxval = cur.next_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension { width, height });
    }
    if maxval == 0 || maxval > STEGO_MAXVAL {
        return Err(Error::MalformedHeader(format!(
            "maxval {maxval} out of range"
        )));
    }
    // Binary rasters start after exactly one whitespace byte.
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ if magic == 2 || magic == 3 => {}
        _ => {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    Ok(Header {
        magic,
        width,
        height,
        maxval,
        raster_start: cur.pos,
    })
}

/// Decode samples (interleaved, as stored) from the raster part of the file.
fn read_raster(bytes: &[u8], header: &Header, channels: usize) -> Result<Vec<u32>> {
    let count = header.width * header.height * channels;
    let raster = &bytes[header.raster_start..];
    let samples: Vec<u32> = if header.magic == 2 || header.magic == 3 {
        let mut cur = Cursor {
            bytes: raster,
            pos: 0,
        };
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            cur.skip_whitespace_and_comments();
            if cur.pos >= raster.len() {
                return Err(Error::TruncatedRaster {
                    expected: count,
                    found: out.len(),
                });
            }
            out.push(cur.next_uint("sample")?);
        }
        out
    } else if header.maxval < 256 {
        if raster.len() < count {
            return Err(Error::TruncatedRaster {
                expected: count,
                found: raster.len(),
            });
        }
        raster[..count].iter().map(|&b| u32::from(b)).collect()
    } else {
        if raster.len() < 2 * count {
            return Err(Error::TruncatedRaster {
                expected: count,
                found: raster.len() / 2,
            });
        }
        raster[..2 * count]
            .chunks_exact(2)
            .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]])))
            .collect()
    };
    if let Some((index, &value)) = samples.iter().enumerate().find(|(_, &v)| v > header.maxval) {
        return Err(Error::SampleOutOfRange {
            index,
            value,
            maxval: header.maxval,
        });
    }
    Ok(samples)
}

fn deinterleave<T: Copy>(samples: &[T], channels: usize) -> Vec<Vec<T>> {
    (0..channels)
        .map(|c| samples.iter().skip(c).step_by(channels).copied().collect())
        .collect()
}

/// Parse an 8-bit PGM or PPM, ASCII or binary.
pub fn read_pixmap(bytes: &[u8]) -> Result<Pixmap> {
    let header = read_header(bytes)?;
    if header.maxval > 255 {
        return Err(Error::UnsupportedMaxval(header.maxval));
    }
    let channels = if header.magic == 2 || header.magic == 5 {
        1
    } else {
        3
    };
    let samples = read_raster(bytes, &header, channels)?;
    let planes = deinterleave(&samples, channels)
        .into_iter()
        .map(|p| {
            GrayImage::new(
                header.width,
                header.height,
                p.into_iter().map(|s| s as u8).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Pixmap::from_planes(planes)
}

/// Serialize with maxval 255; binary (`P5`/`P6`) unless `ascii` is set.
pub fn write_pixmap(img: &Pixmap, ascii: bool) -> Vec<u8> {
    let planes = img.planes();
    let channels = planes.len();
    let magic = match (channels, ascii) {
        (1, false) => "P5",
        (1, true) => "P2",
        (_, false) => "P6",
        (_, true) => "P3",
    };
    let (width, height) = (img.width(), img.height());
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    let interleaved = (0..width * height).flat_map(|i| planes.iter().map(move |p| p.samples[i]));
    if ascii {
        let row_len = width * channels;
        let values: Vec<u8> = interleaved.collect();
        for row in values.chunks(row_len) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend(interleaved);
    }
    out
}

/// Parse a 16-bit biased stego container.
pub fn read_stego(bytes: &[u8]) -> Result<StegoContainer> {
    let header = read_header(bytes)?;
    if header.magic != 5 && header.magic != 6 {
        return Err(Error::MalformedHeader(
            "stego container must be binary P5 or P6".into(),
        ));
    }
    if header.maxval != STEGO_MAXVAL {
        return Err(Error::NotAStegoContainer(header.maxval));
    }
    if header.width % 2 != 0 || header.height % 2 != 0 {
        return Err(Error::OddDimension {
            width: header.width,
            height: header.height,
        });
    }
    let channels = if header.magic == 5 { 1 } else { 3 };
    let samples = read_raster(bytes, &header, channels)?;
    let planes = deinterleave(&samples, channels)
        .into_iter()
        .map(|p| {
            Plane::new(
                header.width,
                header.height,
                p.into_iter().map(|s| s as i32 - STEGO_BIAS).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    StegoContainer::new(planes)
}

/// Serialize a stego container as big-endian 16-bit P5/P6 with bias 512.
pub fn write_stego(container: &StegoContainer) -> Result<Vec<u8>> {
    let magic = if container.channel_count() == 1 {
        "P5"
    } else {
        "P6"
    };
    let mut out = format!(
        "{magic}\n{STEGO_COMMENT}\n{} {}\n{STEGO_MAXVAL}\n",
        container.width, container.height
    )
    .into_bytes();
    out.reserve(2 * container.width * container.height * container.channel_count());
    for i in 0..container.width * container.height {
        for plane in &container.planes {
            let v = plane.samples()[i];
            if !storable(v) {
                return Err(Error::ContainerOverflow { value: v });
            }
            out.extend_from_slice(&((v + STEGO_BIAS) as u16).to_be_bytes());
        }
    }
    Ok(out)
}

/// True when the bytes look like a 16-bit stego container rather than an
/// 8-bit Netpbm image.
pub fn is_stego_container(bytes: &[u8]) -> bool {
    read_header(bytes).is_ok_and(|h| h.maxval == STEGO_MAXVAL)
}
