//! MSE, PSNR and image fidelity.
//!
//! Sums are accumulated in integers and divided once, so results do not
//! depend on traversal order. PSNR uses a fixed peak of 255 even in the
//! translated domain where samples exceed that range.

use crate::error::{Error, Result};
use crate::plane::Plane;

pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// `f64::INFINITY` when `mse == 0`.
    pub psnr: f64,
    pub fidelity: f64,
}

impl MetricsReport {
    /// Metrics between two multi-plane images, averaged over every sample.
    pub fn between(reference: &[Plane], distorted: &[Plane]) -> Result<Self> {
        let sums = ErrorSums::over(reference, distorted)?;
        let mse = sums.mse();
        Ok(Self {
            mse,
            psnr: psnr(mse)?,
            fidelity: sums.fidelity()?,
        })
    }
}

struct ErrorSums {
    squared_error: u128,
    reference_energy: u128,
    count: usize,
}

impl ErrorSums {
    fn over(reference: &[Plane], distorted: &[Plane]) -> Result<Self> {
        let dims = |ps: &[Plane]| {
            ps.first()
                .map_or((0, 0, 0), |p| (p.width(), p.height(), ps.len()))
        };
        if dims(reference) != dims(distorted)
            || reference
                .iter()
                .zip(distorted)
                .any(|(r, d)| (r.width(), r.height()) != (d.width(), d.height()))
        {
            return Err(Error::DimensionMismatch {
                left: dims(reference),
                right: dims(distorted),
            });
        }
        let mut sums = ErrorSums {
            squared_error: 0,
            reference_energy: 0,
            count: 0,
        };
        for (r, d) in reference.iter().zip(distorted) {
            for (&x, &y) in r.samples().iter().zip(d.samples()) {
                let diff = i64::from(x) - i64::from(y);
                sums.squared_error += (diff * diff) as u128;
                sums.reference_energy += (i64::from(x) * i64::from(x)) as u128;
            }
            sums.count += r.samples().len();
        }
        Ok(sums)
    }

    fn mse(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.squared_error as f64 / self.count as f64
    }

    fn fidelity(&self) -> Result<f64> {
        if self.reference_energy == 0 {
            return Err(Error::ZeroEnergy);
        }
        Ok(1.0 - self.squared_error as f64 / self.reference_energy as f64)
    }
}

/// Mean squared error between two planes of identical shape.
pub fn mse(reference: &Plane, distorted: &Plane) -> Result<f64> {
    Ok(ErrorSums::over(
        std::slice::from_ref(reference),
        std::slice::from_ref(distorted),
    )?
    .mse())
}

/// `10 log10(255^2 / mse)`, or infinity for a perfect match.
pub fn psnr(mse_value: f64) -> Result<f64> {
    if mse_value.is_nan() || mse_value < 0.0 {
        return Err(Error::NegativeMse(mse_value));
    }
    if mse_value == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse_value).log10())
}

/// `1 - sum((ref - dist)^2) / sum(ref^2)`.
pub fn image_fidelity(reference: &Plane, distorted: &Plane) -> Result<f64> {
    ErrorSums::over(
        std::slice::from_ref(reference),
        std::slice::from_ref(distorted),
    )?
    .fidelity()
}
