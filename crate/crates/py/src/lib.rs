//! Python bindings: `import fdszt`.

use fdszt_core::{codec, embedcore, imageio, metrics, zmask};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

create_exception!(fdszt, FdsztError, PyException);
create_exception!(fdszt, ImageFormatError, FdsztError);
create_exception!(fdszt, CapacityError, FdsztError);
create_exception!(fdszt, EmbedFailedError, FdsztError);
create_exception!(fdszt, NoPayloadError, FdsztError);
create_exception!(fdszt, MetricsError, FdsztError);

fn image_err(e: imageio::ImageError) -> PyErr {
    ImageFormatError::new_err(e.to_string())
}

fn codec_err(e: codec::CodecError) -> PyErr {
    use codec::CodecError::*;
    let msg = e.to_string();
    match e {
        InsufficientCapacity { .. } => CapacityError::new_err(msg),
        EmbedFailed { .. } => EmbedFailedError::new_err(msg),
        ZeroDimension | PayloadExceedsCapacity { .. } | ShortHeader(_) => {
            NoPayloadError::new_err(msg)
        }
        HeaderOutOfRange { .. } => PyValueError::new_err(msg),
    }
}

fn metrics_err(e: metrics::MetricsError) -> PyErr {
    MetricsError::new_err(e.to_string())
}

fn parse_peak(peak: &str) -> PyResult<metrics::PeakMode> {
    peak.parse().map_err(PyValueError::new_err)
}

/// 8-bit grayscale image, row-major.
#[pyclass(name = "GrayImage", module = "fdszt", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGrayImage {
    inner: imageio::GrayImage,
}

#[pymethods]
impl PyGrayImage {
    #[new]
    fn new(width: usize, height: usize, pixels: Vec<u8>) -> PyResult<Self> {
        imageio::GrayImage::new(width, height, pixels)
            .map(|inner| Self { inner })
            .map_err(image_err)
    }

    #[staticmethod]
    fn from_pgm(data: &[u8]) -> PyResult<Self> {
        imageio::parse_pgm(data)
            .map(|inner| Self { inner })
            .map_err(image_err)
    }

    /// Decodes PGM or 8-bit grayscale PNG bytes.
    #[staticmethod]
    fn decode(data: &[u8]) -> PyResult<Self> {
        imageio::decode_image(data)
            .map(|inner| Self { inner })
            .map_err(image_err)
    }

    #[staticmethod]
    fn open(path: &str) -> PyResult<Self> {
        imageio::read_image(path)
            .map(|inner| Self { inner })
            .map_err(image_err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        imageio::write_image(path, &self.inner).map_err(image_err)
    }

    fn to_pgm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &imageio::write_pgm(&self.inner))
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn pixels<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.inner.pixels())
    }

    fn __repr__(&self) -> String {
        format!(
            "GrayImage(width={}, height={})",
            self.inner.width(),
            self.inner.height()
        )
    }
}

/// MSE, PSNR (dB, may be inf) and image fidelity.
#[pyclass(name = "MetricsReport", module = "fdszt", frozen, get_all)]
pub struct PyMetricsReport {
    mse: f64,
    psnr_db: f64,
    image_fidelity: f64,
    peak_mode: String,
}

#[pymethods]
impl PyMetricsReport {
    fn __repr__(&self) -> String {
        format!(
            "MetricsReport(mse={}, psnr_db={}, image_fidelity={}, peak_mode={:?})",
            self.mse, self.psnr_db, self.image_fidelity, self.peak_mode
        )
    }
}

fn bit_arg(bit: u8) -> PyResult<bool> {
    match bit {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(PyValueError::new_err(format!(
            "bit must be 0 or 1, got {other}"
        ))),
    }
}

/// Masks go back to Python as int lists rather than `bytes`.
fn as_ints(mask: zmask::Mask2x2) -> [u32; 4] {
    mask.0.map(u32::from)
}

#[pyfunction]
fn forward_zt(mask: [u8; 4]) -> [Complex64; 4] {
    zmask::forward_zt(&zmask::Mask2x2(mask)).0
}

#[pyfunction]
fn inverse_zt(coeffs: [Complex64; 4]) -> PyResult<[f64; 4]> {
    zmask::inverse_zt(&zmask::ZCoeffs(coeffs))
        .map(|y| y.0)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Returns `(mask, clamped_flags)`.
#[pyfunction]
fn quantize(values: [f64; 4]) -> ([u32; 4], [bool; 4]) {
    let q = zmask::quantize(&zmask::QuadReal(values));
    (as_ints(q.mask), q.clamped)
}

/// Returns `(index, median_value)`.
#[pyfunction]
fn select_coeff(coeffs: [Complex64; 4]) -> (usize, i64) {
    let s = embedcore::select_coeff(&zmask::ZCoeffs(coeffs));
    (s.index, s.median_value)
}

#[pyfunction]
fn write_bit(value: i64, bit: u8) -> PyResult<i64> {
    Ok(embedcore::write_bit(value, bit_arg(bit)?))
}

#[pyfunction]
fn read_bit(value: i64) -> u8 {
    embedcore::read_bit(value).into()
}

/// Returns `(stego_mask, offset_used)`.
#[pyfunction]
fn embed_bit_in_mask(mask: [u8; 4], bit: u8) -> PyResult<([u32; 4], i64)> {
    embedcore::embed_bit_in_mask(&zmask::Mask2x2(mask), bit_arg(bit)?)
        .map(|o| (as_ints(o.stego_mask), o.offset_used))
        .map_err(|e| EmbedFailedError::new_err(e.to_string()))
}

#[pyfunction]
fn extract_bit_from_mask(mask: [u8; 4]) -> u8 {
    embedcore::extract_bit_from_mask(&zmask::Mask2x2(mask)).into()
}

#[pyfunction]
fn capacity_bits(cover: &PyGrayImage) -> usize {
    codec::capacity_bits(&cover.inner)
}

#[pyfunction]
fn embed_image(py: Python<'_>, cover: &PyGrayImage, secret: &PyGrayImage) -> PyResult<PyGrayImage> {
    let (cover, secret) = (&cover.inner, &secret.inner);
    py.detach(|| codec::embed_image(cover, secret))
        .map(|inner| PyGrayImage { inner })
        .map_err(codec_err)
}

#[pyfunction]
fn extract_image(py: Python<'_>, stego: &PyGrayImage) -> PyResult<PyGrayImage> {
    let stego = &stego.inner;
    py.detach(|| codec::extract_image(stego))
        .map(|inner| PyGrayImage { inner })
        .map_err(codec_err)
}

#[pyfunction]
fn mse(reference: &PyGrayImage, test: &PyGrayImage) -> PyResult<f64> {
    metrics::mse(&reference.inner, &test.inner).map_err(metrics_err)
}

#[pyfunction]
#[pyo3(signature = (reference, test, peak = "255"))]
fn psnr(reference: &PyGrayImage, test: &PyGrayImage, peak: &str) -> PyResult<f64> {
    metrics::psnr(&reference.inner, &test.inner, parse_peak(peak)?).map_err(metrics_err)
}

#[pyfunction]
fn image_fidelity(reference: &PyGrayImage, test: &PyGrayImage) -> PyResult<f64> {
    metrics::image_fidelity(&reference.inner, &test.inner).map_err(metrics_err)
}

#[pyfunction]
#[pyo3(signature = (reference, test, peak = "255"))]
fn report(reference: &PyGrayImage, test: &PyGrayImage, peak: &str) -> PyResult<PyMetricsReport> {
    let r =
        metrics::report(&reference.inner, &test.inner, parse_peak(peak)?).map_err(metrics_err)?;
    Ok(PyMetricsReport {
        mse: r.mse,
        psnr_db: r.psnr_db,
        image_fidelity: r.image_fidelity,
        peak_mode: r.peak_mode.to_string(),
    })
}

#[pymodule]
fn fdszt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyGrayImage>()?;
    m.add_class::<PyMetricsReport>()?;
    m.add("FdsztError", py.get_type::<FdsztError>())?;
    m.add("ImageFormatError", py.get_type::<ImageFormatError>())?;
    m.add("CapacityError", py.get_type::<CapacityError>())?;
    m.add("EmbedFailedError", py.get_type::<EmbedFailedError>())?;
    m.add("NoPayloadError", py.get_type::<NoPayloadError>())?;
    m.add("MetricsError", py.get_type::<MetricsError>())?;
    m.add("HEADER_BITS", codec::HEADER_BITS)?;
    m.add_function(wrap_pyfunction!(forward_zt, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_zt, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(select_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(write_bit, m)?)?;
    m.add_function(wrap_pyfunction!(read_bit, m)?)?;
    m.add_function(wrap_pyfunction!(embed_bit_in_mask, m)?)?;
    m.add_function(wrap_pyfunction!(extract_bit_from_mask, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_bits, m)?)?;
    m.add_function(wrap_pyfunction!(embed_image, m)?)?;
    m.add_function(wrap_pyfunction!(extract_image, m)?)?;
    m.add_function(wrap_pyfunction!(mse, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(image_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
