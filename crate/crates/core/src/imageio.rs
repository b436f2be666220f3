//! In-memory 8-bit grayscale raster plus binary PGM (P5) and grayscale PNG codecs.
//!
//! PGM is the canonical interchange format: it is bit-exact and trivially
//! inspectable. PNG support decodes to the same [`GrayImage`] model and rejects
//! anything that is not 8-bit single-channel.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated raster: expected {expected} bytes, found {found}")]
    TruncatedRaster { expected: usize, found: usize },
    #[error("unsupported maxval {0} (only 8-bit images are supported)")]
    UnsupportedMaxval(u32),
    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("unsupported PNG layout: {0}")]
    UnsupportedPng(String),
    #[error("unrecognized image format (expected binary PGM or PNG)")]
    UnknownFormat,
    #[error("PNG decode failed: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("PNG encode failed: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// 8-bit grayscale raster stored row-major, top-left first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Wraps a row-major pixel buffer. Both dimensions must be non-zero and
    /// `pixels.len()` must equal `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(pixels.len()) {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }
}

/// Tokenizer over a netpbm header: skips whitespace and `#` comments.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
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

    fn read_number(&mut self, what: &str) -> Result<u32, ImageError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImageError::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::MalformedHeader(format!("{what} out of range")))
    }
}

/// Parses a binary (P5) PGM. Maxval 1..=255 is accepted and samples are kept
/// as stored; anything larger is rejected.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::MalformedHeader("bad magic, expected P5".into()));
    }
    let mut reader = HeaderReader { bytes, pos: 2 };
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(ImageError::MalformedHeader("bad magic, expected P5".into())),
    }

    let width = reader.read_number("width")? as usize;
    let height = reader.read_number("height")? as usize;
    let maxval = reader.read_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(ImageError::MalformedHeader(
            "maxval must be positive".into(),
        ));
    }
    if maxval > 255 {
        return Err(ImageError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(reader.pos) {
        Some(b) if b.is_ascii_whitespace() => reader.pos += 1,
        _ => {
            return Err(ImageError::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }

    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImageError::MalformedHeader("dimensions overflow".into()))?;
    let raster = &bytes[reader.pos..];
    if raster.len() < expected {
        return Err(ImageError::TruncatedRaster {
            expected,
            found: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

/// Serializes as `P5\n<width> <height>\n255\n` followed by the raw raster.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + image.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&image.pixels);
    out
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Decodes an 8-bit grayscale PNG. Color, alpha, palette and 16-bit images are
/// refused rather than converted.
pub fn parse_png(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info()?;
    let (color, depth) = reader.output_color_type();
    if color != png::ColorType::Grayscale || depth != png::BitDepth::Eight {
        return Err(ImageError::UnsupportedPng(format!(
            "{color:?} at {depth:?} bit depth, expected 8-bit grayscale"
        )));
    }
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut buf)?;
    let (width, height) = (info.width as usize, info.height as usize);
    let mut pixels = Vec::with_capacity(width * height);
    for row in buf.chunks(info.line_size).take(height) {
        pixels.extend_from_slice(&row[..width]);
    }
    GrayImage::new(width, height, pixels)
}

pub fn write_png(image: &GrayImage) -> Result<Vec<u8>, ImageError> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, image.width as u32, image.height as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&image.pixels)?;
        writer.finish()?;
    }
    Ok(out)
}

/// Decodes PGM or PNG, chosen by content signature.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    if bytes.starts_with(b"P5") {
        parse_pgm(bytes)
    } else if bytes.starts_with(&PNG_SIGNATURE) {
        parse_png(bytes)
    } else {
        Err(ImageError::UnknownFormat)
    }
}

pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage, ImageError> {
    decode_image(&fs::read(path)?)
}

/// Writes PNG when the path ends in `.png` (case-insensitive), PGM otherwise.
pub fn write_image(path: impl AsRef<Path>, image: &GrayImage) -> Result<(), ImageError> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let bytes = if is_png {
        write_png(image)?
    } else {
        write_pgm(image)
    };
    fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgm(header: &str, raster: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(raster);
        v
    }

    #[test]
    fn smallest_legal_file() {
        let img = parse_pgm(&pgm("P5\n1 1\n255\n", &[0])).unwrap();
        assert_eq!(img, GrayImage::new(1, 1, vec![0]).unwrap());
    }

    #[test]
    fn two_by_two_raster_order() {
        let img = parse_pgm(&pgm("P5\n2 2\n255\n", &[1, 2, 3, 4])).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[1, 2, 3, 4]);
        assert_eq!(img.get(1, 0), 3);
    }

    #[test]
    fn truncated_raster() {
        let err = parse_pgm(&pgm("P5\n2 2\n255\n", &[1, 2, 3])).unwrap_err();
        assert!(matches!(
            err,
            ImageError::TruncatedRaster {
                expected: 4,
                found: 3
            }
        ));
    }

    #[test]
    fn comments_and_odd_whitespace() {
        let img = parse_pgm(&pgm(
            "P5 # made by hand\n# another\n3\t1 # dims\n255\n",
            &[7, 8, 9],
        ))
        .unwrap();
        assert_eq!(img.pixels(), &[7, 8, 9]);
    }

    #[test]
    fn raster_may_start_with_whitespace_byte() {
        // 0x0a and 0x20 are legitimate pixel values right after the separator
        let img = parse_pgm(&pgm("P5\n2 1\n255\n", b"\n ")).unwrap();
        assert_eq!(img.pixels(), &[10, 32]);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_pgm(b"P2\n1 1\n255\n0"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n0 1\n255\n"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n1\n"),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_pgm(b""),
            Err(ImageError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n1 1\n65535\n\0\0"),
            Err(ImageError::UnsupportedMaxval(65535))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n1 1\n256\n\0"),
            Err(ImageError::UnsupportedMaxval(256))
        ));
    }

    #[test]
    fn low_maxval_kept_as_stored() {
        let img = parse_pgm(&pgm("P5\n2 1\n15\n", &[3, 15])).unwrap();
        assert_eq!(img.pixels(), &[3, 15]);
    }

    #[test]
    fn write_exact_bytes() {
        let img = GrayImage::new(1, 1, vec![255]).unwrap();
        assert_eq!(write_pgm(&img), b"P5\n1 1\n255\n\xff".to_vec());

        let img = GrayImage::new(3, 1, vec![0, 128, 255]).unwrap();
        let bytes = write_pgm(&img);
        assert_eq!(&bytes[bytes.len() - 3..], &[0x00, 0x80, 0xff]);
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
    }

    #[test]
    fn png_roundtrip_matches_pgm_model() {
        let img = GrayImage::new(3, 2, vec![0, 1, 2, 253, 254, 255]).unwrap();
        let png = write_png(&img).unwrap();
        assert_eq!(decode_image(&png).unwrap(), img);
        assert_eq!(decode_image(&write_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn png_color_refused() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 1, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[1, 2, 3]).unwrap();
        }
        assert!(matches!(
            parse_png(&out),
            Err(ImageError::UnsupportedPng(_))
        ));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!(
            decode_image(b"GIF89a"),
            Err(ImageError::UnknownFormat)
        ));
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn pgm_roundtrip(img in arb_image()) {
            prop_assert_eq!(parse_pgm(&write_pgm(&img)).unwrap(), img);
        }

        #[test]
        fn parse_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            // either a fully valid image or a typed error
            if let Ok(img) = parse_pgm(&bytes) {
                prop_assert_eq!(img.pixels().len(), img.width() * img.height());
            }
            let mut prefixed = b"P5\n".to_vec();
            prefixed.extend_from_slice(&bytes);
            if let Ok(img) = parse_pgm(&prefixed) {
                prop_assert_eq!(img.pixels().len(), img.width() * img.height());
            }
        }
    }
}
