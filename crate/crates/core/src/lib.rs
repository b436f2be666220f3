//! Grayscale image steganography in the Z-transform domain.
//!
//! A cover image is cut into 2x2 masks in row-major order. Each mask is taken to
//! the frequency domain with a four-point Z-transform on the unit circle, one
//! secret bit is written into bit 3 of the median coefficient's real part, and
//! the mask is brought back to the spatial domain. The first 32 masks carry the
//! secret image's dimensions, the rest carry its pixels.
//!
//! ```
//! use fdszt_core::{embed_image, extract_image, GrayImage};
//!
//! let cover = GrayImage::filled(32, 32, 120).unwrap();
//! let secret = GrayImage::new(2, 2, vec![1, 2, 3, 250]).unwrap();
//! let stego = embed_image(&cover, &secret).unwrap();
//! assert_eq!(extract_image(&stego).unwrap(), secret);
//! ```

pub mod codec;
pub mod embedcore;
pub mod imageio;
pub mod metrics;
pub mod zmask;

pub use codec::{
    capacity_bits, decode_header, embed_image, encode_header, extract_image, required_bits,
    BitStream, CodecError, StegoHeader, HEADER_BITS,
};
pub use embedcore::{
    embed_bit_in_mask, extract_bit_from_mask, read_bit, select_coeff, write_bit, CoeffSelection,
    EmbedError, EmbedOutcome,
};
pub use imageio::{
    decode_image, parse_pgm, parse_png, read_image, write_image, write_pgm, write_png, GrayImage,
    ImageError,
};
pub use metrics::{image_fidelity, mse, psnr, MetricsError, MetricsReport, PeakMode};
pub use zmask::{forward_zt, inverse_zt, quantize, Mask2x2, QuadReal, Quantized, ZCoeffs, ZError};
