//! Whole-image embedding: header and payload serialization, capacity
//! accounting and row-major mask iteration.
//!
//! Bit stream layout, one bit per 2x2 mask:
//!
//! ```text
//! [ secret height: u16 BE ][ secret width: u16 BE ][ secret pixels, row-major, MSB first ]
//! ```
//!
//! Masks past the end of the stream and any odd trailing row or column are
//! copied through untouched.

use rayon::prelude::*;
use thiserror::Error;

use crate::embedcore::{embed_bit_in_mask, extract_bit_from_mask};
use crate::imageio::GrayImage;
use crate::zmask::Mask2x2;

pub const HEADER_BITS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("insufficient capacity: required={required} bits available={available}")]
    InsufficientCapacity { required: usize, available: usize },
    #[error("embedding failed at mask row {row}, col {col} (pixel {}, {}) for bit {}", .row * 2, .col * 2, u8::from(*.bit))]
    EmbedFailed { row: usize, col: usize, bit: bool },
    #[error("secret dimensions {height}x{width} do not fit the 16-bit header")]
    HeaderOutOfRange { height: usize, width: usize },
    #[error("header decodes to a zero dimension; no payload present")]
    ZeroDimension,
    #[error("header claims {required} bits but the image holds {available}")]
    PayloadExceedsCapacity { required: usize, available: usize },
    #[error("header needs {HEADER_BITS} bits, got {0}")]
    ShortHeader(usize),
}

/// Dimensions of the hidden image, carried in the first 32 masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StegoHeader {
    pub height: u16,
    pub width: u16,
}

impl StegoHeader {
    pub fn new(height: usize, width: usize) -> Result<Self, CodecError> {
        let range = 1..=usize::from(u16::MAX);
        if !range.contains(&height) || !range.contains(&width) {
            return Err(CodecError::HeaderOutOfRange { height, width });
        }
        Ok(Self {
            height: height as u16,
            width: width as u16,
        })
    }

    pub fn pixel_count(&self) -> usize {
        usize::from(self.height) * usize::from(self.width)
    }

    pub fn payload_bits(&self) -> usize {
        8 * self.pixel_count()
    }
}

/// Ordered bits, MSB first within every serialized byte or word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitStream(Vec<bool>);

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self(Vec::with_capacity(n))
    }

    pub fn push_bits(&mut self, value: u64, width: u32) {
        self.0
            .extend((0..width).rev().map(|shift| (value >> shift) & 1 == 1));
    }

    pub fn push_byte(&mut self, byte: u8) {
        self.push_bits(u64::from(byte), 8);
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<bool>> for BitStream {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

fn bits_to_u64(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

/// Number of complete 2x2 masks, one bit each.
pub fn capacity_bits(cover: &GrayImage) -> usize {
    (cover.height() / 2) * (cover.width() / 2)
}

pub fn encode_header(height: usize, width: usize) -> Result<BitStream, CodecError> {
    let header = StegoHeader::new(height, width)?;
    let mut bits = BitStream::with_capacity(HEADER_BITS);
    bits.push_bits(u64::from(header.height), 16);
    bits.push_bits(u64::from(header.width), 16);
    Ok(bits)
}

/// Decodes the first 32 bits of `bits`.
pub fn decode_header(bits: &[bool]) -> Result<StegoHeader, CodecError> {
    if bits.len() < HEADER_BITS {
        return Err(CodecError::ShortHeader(bits.len()));
    }
    let height = bits_to_u64(&bits[..16]) as u16;
    let width = bits_to_u64(&bits[16..32]) as u16;
    if height == 0 || width == 0 {
        return Err(CodecError::ZeroDimension);
    }
    Ok(StegoHeader { height, width })
}

/// Header followed by every secret pixel, MSB first.
pub fn serialize_secret(secret: &GrayImage) -> Result<BitStream, CodecError> {
    let mut bits = encode_header(secret.height(), secret.width())?;
    bits.0.reserve(8 * secret.pixels().len());
    for &p in secret.pixels() {
        bits.push_byte(p);
    }
    Ok(bits)
}

/// Bits needed to carry `secret`, header included.
pub fn required_bits(secret: &GrayImage) -> usize {
    HEADER_BITS + 8 * secret.pixels().len()
}

#[derive(Debug, Clone, Copy)]
struct MaskGrid {
    cols: usize,
}

impl MaskGrid {
    fn of(image: &GrayImage) -> Self {
        Self {
            cols: image.width() / 2,
        }
    }

    fn position(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    fn read(&self, image: &GrayImage, index: usize) -> Mask2x2 {
        let (r, c) = self.position(index);
        let (y, x) = (2 * r, 2 * c);
        Mask2x2([
            image.get(y, x),
            image.get(y, x + 1),
            image.get(y + 1, x),
            image.get(y + 1, x + 1),
        ])
    }

    fn write(&self, image: &mut GrayImage, index: usize, mask: Mask2x2) {
        let (r, c) = self.position(index);
        let (y, x) = (2 * r, 2 * c);
        let [a, b, cc, d] = mask.0;
        image.set(y, x, a);
        image.set(y, x + 1, b);
        image.set(y + 1, x, cc);
        image.set(y + 1, x + 1, d);
    }
}

/// Hides `secret` in `cover`, one bit per mask in row-major mask order.
///
/// Masks are embedded in parallel on the current rayon pool; the result is
/// identical for any thread count. On failure the error names the first
/// failing mask in row-major order.
pub fn embed_image(cover: &GrayImage, secret: &GrayImage) -> Result<GrayImage, CodecError> {
    let available = capacity_bits(cover);
    let required = required_bits(secret);
    if required > available {
        return Err(CodecError::InsufficientCapacity {
            required,
            available,
        });
    }
    let stream = serialize_secret(secret)?;
    let grid = MaskGrid::of(cover);

    let outcomes: Vec<Result<Mask2x2, CodecError>> = stream
        .bits()
        .par_iter()
        .enumerate()
        .map(|(i, &bit)| {
            embed_bit_in_mask(&grid.read(cover, i), bit)
                .map(|o| o.stego_mask)
                .map_err(|_| {
                    let (row, col) = grid.position(i);
                    CodecError::EmbedFailed { row, col, bit }
                })
        })
        .collect();

    let mut stego = cover.clone();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        grid.write(&mut stego, i, outcome?);
    }
    Ok(stego)
}

fn read_bits(stego: &GrayImage, grid: MaskGrid, range: std::ops::Range<usize>) -> Vec<bool> {
    range
        .into_par_iter()
        .map(|i| extract_bit_from_mask(&grid.read(stego, i)))
        .collect()
}

/// Reads the header, validates it against the image's capacity, then
/// reassembles the secret pixels.
pub fn extract_image(stego: &GrayImage) -> Result<GrayImage, CodecError> {
    let available = capacity_bits(stego);
    if available < HEADER_BITS {
        return Err(CodecError::PayloadExceedsCapacity {
            required: HEADER_BITS,
            available,
        });
    }
    let grid = MaskGrid::of(stego);
    let header = decode_header(&read_bits(stego, grid, 0..HEADER_BITS))?;
    let required = HEADER_BITS + header.payload_bits();
    if required > available {
        return Err(CodecError::PayloadExceedsCapacity {
            required,
            available,
        });
    }

    let bits = read_bits(stego, grid, HEADER_BITS..required);
    let pixels = bits.chunks(8).map(|b| bits_to_u64(b) as u8).collect();
    Ok(GrayImage::new(
        usize::from(header.width),
        usize::from(header.height),
        pixels,
    )
    .expect("header dimensions are non-zero and match the payload"))
}
