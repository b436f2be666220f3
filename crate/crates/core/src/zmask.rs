//! Four-point Z-transform of a 2x2 mask evaluated on the unit circle (r = 1)
//! at ω ∈ {0, π/2, π, 3π/2}.
//!
//! The mask is flattened row-major into x(0..3) and transformed as
//! `X(k) = Σ_m x(m)·e^{-j·kπm/2}`. Every twiddle factor is one of 1, -j, -1, j,
//! so the forward and inverse passes are evaluated with exact sign/swap
//! arithmetic and integer inputs give integer-valued coefficients.

use num_complex::Complex64;
use thiserror::Error;

/// Largest imaginary residue tolerated in an inverse transform before the
/// coefficients are considered non-conjugate-symmetric.
pub const NON_REAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ZError {
    #[error("inverse transform is not real: entry {index} has imaginary residue {residue:e}")]
    NonRealReconstruction { index: usize, residue: f64 },
}

/// Four cover intensities of a 2x2 block: top-left, top-right, bottom-left,
/// bottom-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mask2x2(pub [u8; 4]);

impl Mask2x2 {
    pub fn new(values: [u8; 4]) -> Self {
        Self(values)
    }

    pub fn values(&self) -> [u8; 4] {
        self.0
    }
}

impl From<[u8; 4]> for Mask2x2 {
    fn from(v: [u8; 4]) -> Self {
        Self(v)
    }
}

/// Frequency coefficients X(0..3); index k corresponds to ω = kπ/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZCoeffs(pub [Complex64; 4]);

impl ZCoeffs {
    /// Real parts rounded half away from zero.
    pub fn rounded_reals(&self) -> [i64; 4] {
        self.0.map(|c| c.re.round() as i64)
    }
}

/// Raw inverse-transform output before rounding and clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadReal(pub [f64; 4]);

/// Result of mapping a [`QuadReal`] back to pixel range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantized {
    pub mask: Mask2x2,
    /// `true` where the rounded value fell outside [0, 255].
    pub clamped: [bool; 4],
}

impl Quantized {
    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().any(|&c| c)
    }
}

/// Multiplies `z` by `(-j)^p` when `forward`, otherwise by `j^p`, exactly.
#[inline]
fn rotate_quarter(z: Complex64, p: usize, forward: bool) -> Complex64 {
    // forward twiddles cycle 1, -j, -1, j; inverse twiddles cycle 1, j, -1, -j
    let p = if forward { p % 4 } else { (4 - p % 4) % 4 };
    match p {
        0 => z,
        1 => Complex64::new(z.im, -z.re),
        2 => Complex64::new(-z.re, -z.im),
        _ => Complex64::new(-z.im, z.re),
    }
}

pub fn forward_zt(mask: &Mask2x2) -> ZCoeffs {
    let x = mask.0.map(|v| Complex64::new(f64::from(v), 0.0));
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = x
            .iter()
            .enumerate()
            .map(|(m, &xm)| rotate_quarter(xm, k * m, true))
            .sum();
    }
    ZCoeffs(out)
}

/// `y(m) = ¼ Σ_k X(k)·e^{+j·kπm/2}`, returning real parts.
///
/// Fails with [`ZError::NonRealReconstruction`] if any imaginary residue
/// exceeds [`NON_REAL_TOLERANCE`], which only happens when the coefficients
/// were edited without preserving conjugate symmetry.
pub fn inverse_zt(coeffs: &ZCoeffs) -> Result<QuadReal, ZError> {
    let mut out = [0.0; 4];
    for (m, slot) in out.iter_mut().enumerate() {
        let sum: Complex64 = coeffs
            .0
            .iter()
            .enumerate()
            .map(|(k, &xk)| rotate_quarter(xk, k * m, false))
            .sum();
        let y = sum / 4.0;
        if y.im.abs() > NON_REAL_TOLERANCE {
            return Err(ZError::NonRealReconstruction {
                index: m,
                residue: y.im,
            });
        }
        *slot = y.re;
    }
    Ok(QuadReal(out))
}

/// Rounds half away from zero, then clamps to [0, 255], flagging clamped
/// entries. NaN maps to 0 and is flagged.
pub fn quantize(y: &QuadReal) -> Quantized {
    let mut mask = [0u8; 4];
    let mut clamped = [false; 4];
    for (i, &v) in y.0.iter().enumerate() {
        let r = v.round();
        mask[i] = if r.is_nan() || r < 0.0 {
            clamped[i] = true;
            0
        } else if r > 255.0 {
            clamped[i] = true;
            255
        } else {
            r as u8
        };
    }
    Quantized {
        mask: Mask2x2(mask),
        clamped,
    }
}
