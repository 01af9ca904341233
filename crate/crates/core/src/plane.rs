use crate::error::{Error, Result};

/// A row-major plane of signed samples.
///
/// Translated and stego images live in this domain: upscaling pushes samples
/// below 0 and above 255, so they cannot be stored as `u8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<i32>,
}

impl Plane {
    pub fn new(width: usize, height: usize, samples: Vec<i32>) -> Result<Self> {
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

    pub fn filled(width: usize, height: usize, value: i32) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[i32] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [i32] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<i32> {
        self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.samples[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: i32) {
        self.samples[row * self.width + col] = value;
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if !self.width.is_multiple_of(2) || !self.height.is_multiple_of(2) {
            return Err(Error::OddDimension {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}
