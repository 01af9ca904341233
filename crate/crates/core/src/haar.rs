//! One-level 2D Haar transform and the upscaling construction built on it.
//!
//! For a 2x2 block `[x00 x01; x10 x11]` the forward transform produces, in
//! quarter units (stored value `q` means coefficient `q / 4`):
//!
//! ```text
//! a = x00 + x01 + x10 + x11
//! h = x00 - x01 + x10 - x11
//! v = x00 + x01 - x10 - x11
//! d = x00 - x01 - x10 + x11
//! ```
//!
//! and the inverse maps real coefficients `(A, H, V, D)` back to
//!
//! ```text
//! x00 = A + H + V + D    x01 = A - H + V - D
//! x10 = A + H - V - D    x11 = A - H - V + D
//! ```
//!
//! Everything stays in integers, so reconstruction is exact.

use crate::error::{Error, Result};
use crate::pixmap::{GrayImage, StegoContainer};
use crate::plane::Plane;

/// Average, horizontal, vertical and diagonal subbands in quarter units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbandSet {
    pub a: Plane,
    pub h: Plane,
    pub v: Plane,
    pub d: Plane,
}

impl SubbandSet {
    pub fn new(a: Plane, h: Plane, v: Plane, d: Plane) -> Result<Self> {
        let dims = |p: &Plane| (p.width(), p.height(), 1);
        for other in [&h, &v, &d] {
            if dims(other) != dims(&a) {
                return Err(Error::DimensionMismatch {
                    left: dims(&a),
                    right: dims(other),
                });
            }
        }
        Ok(Self { a, h, v, d })
    }

    /// Subband rows (half the image height).
    pub fn n_rows(&self) -> usize {
        self.a.height()
    }

    /// Subband columns (half the image width).
    pub fn n_cols(&self) -> usize {
        self.a.width()
    }
}

/// Forward transform of an even-sized plane.
pub fn forward_haar(img: &Plane) -> Result<SubbandSet> {
    img.require_even()?;
    let (rows, cols) = (img.height() / 2, img.width() / 2);
    let n = rows * cols;
    let (mut a, mut h, mut v, mut d) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for r in 0..rows {
        for c in 0..cols {
            let x00 = img.get(2 * r, 2 * c);
            let x01 = img.get(2 * r, 2 * c + 1);
            let x10 = img.get(2 * r + 1, 2 * c);
            let x11 = img.get(2 * r + 1, 2 * c + 1);
            a.push(x00 + x01 + x10 + x11);
            h.push(x00 - x01 + x10 - x11);
            v.push(x00 + x01 - x10 - x11);
            d.push(x00 - x01 - x10 + x11);
        }
    }
    SubbandSet::new(
        Plane::new(cols, rows, a)?,
        Plane::new(cols, rows, h)?,
        Plane::new(cols, rows, v)?,
        Plane::new(cols, rows, d)?,
    )
}

/// Inverse transform; fails if any sample would be fractional.
pub fn inverse_haar(s: &SubbandSet) -> Result<Plane> {
    let (rows, cols) = (s.n_rows(), s.n_cols());
    let mut out = Plane::filled(2 * cols, 2 * rows, 0)?;
    for r in 0..rows {
        for c in 0..cols {
            let (a, h, v, d) = (s.a.get(r, c), s.h.get(r, c), s.v.get(r, c), s.d.get(r, c));
            let quarters = [a + h + v + d, a - h + v - d, a + h - v - d, a - h - v + d];
            if quarters.iter().any(|q| q.rem_euclid(4) != 0) {
                return Err(Error::NonIntegerReconstruction { row: r, col: c });
            }
            out.set(2 * r, 2 * c, quarters[0] / 4);
            out.set(2 * r, 2 * c + 1, quarters[1] / 4);
            out.set(2 * r + 1, 2 * c, quarters[2] / 4);
            out.set(2 * r + 1, 2 * c + 1, quarters[3] / 4);
        }
    }
    Ok(out)
}

/// A 2x upscaled cover: one plane per channel, plus the false detail
/// coefficient used to build it (unknown when loaded from a container).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslatedImage {
    planes: Vec<Plane>,
    beta: Option<u8>,
}

impl TranslatedImage {
    pub fn new(planes: Vec<Plane>, beta: Option<u8>) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::MalformedHeader("translated image needs a plane".into()))?;
        first.require_even()?;
        for p in &planes[1..] {
            if (p.width(), p.height()) != (first.width(), first.height()) {
                return Err(Error::DimensionMismatch {
                    left: (first.width(), first.height(), 1),
                    right: (p.width(), p.height(), 1),
                });
            }
        }
        Ok(Self { planes, beta })
    }

    /// Upscale every plane of a cover with the same `beta`.
    pub fn from_cover(cover: &[&GrayImage], beta: i32) -> Result<Self> {
        let planes = cover
            .iter()
            .map(|p| resize_plane(p, beta))
            .collect::<Result<Vec<_>>>()?;
        Self::new(planes, Some(beta as u8))
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn beta(&self) -> Option<u8> {
        self.beta
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn planes_mut(&mut self) -> &mut [Plane] {
        &mut self.planes
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.planes
    }

    /// Number of 2x2 blocks across all channels.
    pub fn block_count(&self) -> usize {
        self.planes.len() * (self.width() / 2) * (self.height() / 2)
    }

    /// Recover every cover plane, in channel order.
    pub fn recover(&self) -> Result<Vec<GrayImage>> {
        self.planes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                recover_cover(p).map_err(|e| match e {
                    Error::Tampered {
                        row, col, reason, ..
                    } => Error::Tampered {
                        plane: i,
                        row,
                        col,
                        reason,
                    },
                    other => other,
                })
            })
            .collect()
    }
}

impl TryFrom<&TranslatedImage> for StegoContainer {
    type Error = Error;

    fn try_from(t: &TranslatedImage) -> Result<Self> {
        StegoContainer::new(t.planes.clone())
    }
}

impl From<StegoContainer> for TranslatedImage {
    fn from(c: StegoContainer) -> Self {
        Self {
            planes: c.into_planes(),
            beta: None,
        }
    }
}

fn check_beta(beta: i32) -> Result<()> {
    if !(0..=255).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

fn resize_plane(cover: &GrayImage, beta: i32) -> Result<Plane> {
    check_beta(beta)?;
    let (w, h) = (cover.width(), cover.height());
    let a = Plane::new(
        w,
        h,
        cover.samples().iter().map(|&s| 4 * i32::from(s)).collect(),
    )?;
    let detail = Plane::filled(w, h, 4 * beta)?;
    inverse_haar(&SubbandSet::new(a, detail.clone(), detail.clone(), detail)?)
}

/// Upscale a grayscale cover by feeding it as the average subband with all
/// three detail subbands set to `beta`.
pub fn resize_cover(cover: &GrayImage, beta: i32) -> Result<TranslatedImage> {
    TranslatedImage::from_cover(&[cover], beta)
}

/// Recover the cover from a translated or stego plane via the average
/// subband. Each block sum must be a multiple of four and its quarter must be
/// a valid 8-bit intensity; anything else means the image was altered.
pub fn recover_cover(stego: &Plane) -> Result<GrayImage> {
    let bands = forward_haar(stego)?;
    let mut samples = Vec::with_capacity(bands.n_rows() * bands.n_cols());
    for r in 0..bands.n_rows() {
        for c in 0..bands.n_cols() {
            let sum = bands.a.get(r, c);
            if sum.rem_euclid(4) != 0 {
                return Err(Error::Tampered {
                    plane: 0,
                    row: r,
                    col: c,
                    reason: "block sum not divisible by 4",
                });
            }
            let avg = sum / 4;
            if !(0..=255).contains(&avg) {
                return Err(Error::Tampered {
                    plane: 0,
                    row: r,
                    col: c,
                    reason: "recovered intensity outside 0..=255",
                });
            }
            samples.push(avg as u8);
        }
    }
    GrayImage::new(bands.n_cols(), bands.n_rows(), samples)
}
