//! Per-mask embedding and extraction.
//!
//! One secret bit lives in bit 3 (weight 8) of the magnitude of the
//! median-selected coefficient's rounded real part. The median is the lower
//! median (2nd smallest) of the four rounded real parts, ties broken towards the
//! lowest index. Writes to X(1) are mirrored onto X(3) so the inverse transform
//! stays real.
//!
//! Embedding walks a fixed ladder of candidate values and keeps the first one
//! whose quantized stego mask extracts back to the intended bit without any
//! clamping.

use thiserror::Error;

use crate::zmask::{forward_zt, inverse_zt, quantize, Mask2x2, ZCoeffs};

/// Weight of the payload bit inside a coefficient magnitude.
pub const BIT_WEIGHT: i64 = 8;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum EmbedError {
    #[error("cannot embed bit {} into mask {:?}: no adjustment candidate survives", u8::from(*.bit), .mask.0)]
    EmbedFailed { mask: Mask2x2, bit: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffSelection {
    pub index: usize,
    pub median_value: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbedOutcome {
    pub stego_mask: Mask2x2,
    /// Distance of the accepted candidate from the plain bit write.
    pub offset_used: i64,
    /// Index of the coefficient that carries the bit.
    pub index: usize,
    /// Rounded real part of that coefficient before embedding.
    pub original_value: i64,
    /// Real part written into the coefficient (before quantization).
    pub target_value: i64,
    pub verified: bool,
}

pub fn select_coeff(coeffs: &ZCoeffs) -> CoeffSelection {
    select_from_reals(coeffs.rounded_reals())
}

fn select_from_reals(reals: [i64; 4]) -> CoeffSelection {
    let mut sorted = reals;
    sorted.sort_unstable();
    let median_value = sorted[1];
    let index = reals
        .iter()
        .position(|&r| r == median_value)
        .expect("median is drawn from the same values");
    CoeffSelection {
        index,
        median_value,
    }
}

/// Sets or clears bit 3 of `|value|`, keeping the sign.
pub fn write_bit(value: i64, bit: bool) -> i64 {
    let magnitude = value.abs();
    let magnitude = if bit {
        magnitude | BIT_WEIGHT
    } else {
        magnitude & !BIT_WEIGHT
    };
    if value < 0 {
        -magnitude
    } else {
        magnitude
    }
}

pub fn read_bit(value: i64) -> bool {
    value.abs() & BIT_WEIGHT != 0
}

/// Candidate real-part values in the order they are tried.
fn candidate_ladder(median_value: i64, bit: bool) -> Vec<i64> {
    let v0 = write_bit(median_value, bit);
    let mut ladder = vec![v0, v0 + 16, v0 - 16];
    if read_bit(-v0) == bit {
        ladder.push(-v0);
    }
    ladder.extend([v0 + 32, v0 - 32]);
    let mut seen = Vec::with_capacity(ladder.len());
    for v in ladder {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen
}

/// Overwrites the real part of the selected coefficient, mirroring onto the
/// conjugate partner for the ω = π/2, 3π/2 pair.
fn with_real_part(coeffs: &ZCoeffs, index: usize, value: i64) -> ZCoeffs {
    let mut out = *coeffs;
    let v = value as f64;
    match index {
        1 | 3 => {
            out.0[1].re = v;
            out.0[3].re = v;
        }
        i => out.0[i].re = v,
    }
    out
}

pub fn extract_bit_from_mask(mask: &Mask2x2) -> bool {
    let selection = select_coeff(&forward_zt(mask));
    read_bit(selection.median_value)
}

pub fn embed_bit_in_mask(mask: &Mask2x2, bit: bool) -> Result<EmbedOutcome, EmbedError> {
    let coeffs = forward_zt(mask);
    let selection = select_coeff(&coeffs);
    let ladder = candidate_ladder(selection.median_value, bit);
    let v0 = ladder[0];

    for target in ladder {
        let edited = with_real_part(&coeffs, selection.index, target);
        // mirrored edits keep the pair conjugate-symmetric, so this cannot fail
        let Ok(spatial) = inverse_zt(&edited) else {
            debug_assert!(false, "asymmetric coefficient edit");
            continue;
        };
        let quantized = quantize(&spatial);
        if quantized.any_clamped() {
            continue;
        }
        if extract_bit_from_mask(&quantized.mask) == bit {
            return Ok(EmbedOutcome {
                stego_mask: quantized.mask,
                offset_used: target - v0,
                index: selection.index,
                original_value: selection.median_value,
                target_value: target,
                verified: true,
            });
        }
    }
    Err(EmbedError::EmbedFailed { mask: *mask, bit })
}
