//! MSE, PSNR and image fidelity between a reference and a test image.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::imageio::GrayImage;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("peak undefined: reference is all zero but images differ")]
    UndefinedPeak,
    #[error("image fidelity undefined: test image has zero energy")]
    ZeroDenominator,
}

/// Peak value used in the PSNR numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum PeakMode {
    /// 255, the full 8-bit range.
    #[default]
    Fixed255,
    /// Largest intensity in the reference image.
    ObservedMax,
}

impl fmt::Display for PeakMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeakMode::Fixed255 => "Fixed255",
            PeakMode::ObservedMax => "ObservedMax",
        })
    }
}

impl FromStr for PeakMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "255" | "Fixed255" => Ok(PeakMode::Fixed255),
            "max" | "ObservedMax" => Ok(PeakMode::ObservedMax),
            other => Err(format!("unknown peak mode {other:?}, expected 255 or max")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// `f64::INFINITY` for identical images.
    pub psnr_db: f64,
    pub image_fidelity: f64,
    pub peak_mode: PeakMode,
}

fn check_dims(reference: &GrayImage, test: &GrayImage) -> Result<(), MetricsError> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return Err(MetricsError::DimensionMismatch(
            reference.width(),
            reference.height(),
            test.width(),
            test.height(),
        ));
    }
    Ok(())
}

fn squared_error_sum(reference: &GrayImage, test: &GrayImage) -> u64 {
    reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(&a, &b)| {
            let d = i64::from(a) - i64::from(b);
            (d * d) as u64
        })
        .sum()
}

pub fn mse(reference: &GrayImage, test: &GrayImage) -> Result<f64, MetricsError> {
    check_dims(reference, test)?;
    Ok(squared_error_sum(reference, test) as f64 / reference.pixels().len() as f64)
}

/// `10·log10(peak² / MSE)`, infinite when the images are identical.
pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

pub fn psnr(
    reference: &GrayImage,
    test: &GrayImage,
    peak_mode: PeakMode,
) -> Result<f64, MetricsError> {
    let mse = mse(reference, test)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = match peak_mode {
        PeakMode::Fixed255 => 255.0,
        PeakMode::ObservedMax => {
            let max = reference.pixels().iter().copied().max().unwrap_or(0);
            if max == 0 {
                return Err(MetricsError::UndefinedPeak);
            }
            f64::from(max)
        }
    };
    Ok(psnr_from_mse(mse, peak))
}

/// `1 − Σ(ref − test)² / Σ test²`; the denominator is the test image energy.
pub fn image_fidelity(reference: &GrayImage, test: &GrayImage) -> Result<f64, MetricsError> {
    check_dims(reference, test)?;
    let energy: u64 = test.pixels().iter().map(|&p| u64::from(p).pow(2)).sum();
    if energy == 0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok(1.0 - squared_error_sum(reference, test) as f64 / energy as f64)
}

pub fn report(
    reference: &GrayImage,
    test: &GrayImage,
    peak_mode: PeakMode,
) -> Result<MetricsReport, MetricsError> {
    Ok(MetricsReport {
        mse: mse(reference, test)?,
        psnr_db: psnr(reference, test, peak_mode)?,
        image_fidelity: image_fidelity(reference, test)?,
        peak_mode,
    })
}
