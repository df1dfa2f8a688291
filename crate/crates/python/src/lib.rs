//! Python bindings: `tdasweep.extract` and `tdasweep.batch_extract` over
//! NumPy arrays. All computation happens in the core crate; this module only
//! converts arrays and errors.

use numpy::{
    IntoPyArray, PyArray1, PyArray2, PyArrayMethods, PyReadonlyArrayDyn, PyUntypedArrayMethods,
};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use tdasweep::{Dataset, GrayImage, SweepConfig};

fn value_error(e: tdasweep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Mirrors the core `SweepConfig`; validation errors raise `ValueError`.
#[pyclass(name = "SweepConfig", module = "tdasweep", frozen, from_py_object)]
#[derive(Clone)]
pub struct PySweepConfig {
    inner: SweepConfig,
}

#[pymethods]
impl PySweepConfig {
    #[new]
    #[pyo3(signature = (thresholds, interval_width = 1, workers = None))]
    fn new(thresholds: Vec<i64>, interval_width: i64, workers: Option<i64>) -> PyResult<Self> {
        let width = usize::try_from(interval_width).map_err(|_| {
            PyValueError::new_err(format!(
                "invalid argument: interval width {interval_width} is negative"
            ))
        })?;
        let workers = workers
            .map(|w| {
                usize::try_from(w).map_err(|_| {
                    PyValueError::new_err(format!("invalid argument: workers {w} is negative"))
                })
            })
            .transpose()?;
        let inner = SweepConfig::new(thresholds, width)
            .and_then(|c| c.with_workers(workers))
            .map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn thresholds(&self) -> Vec<u8> {
        self.inner.thresholds().to_vec()
    }

    #[getter]
    fn interval_width(&self) -> usize {
        self.inner.interval_width()
    }

    #[getter]
    fn workers(&self) -> Option<usize> {
        self.inner.workers()
    }

    /// Feature count for images of the given shape.
    #[pyo3(signature = (rows, cols, channels = 1))]
    fn feature_count(&self, rows: usize, cols: usize, channels: usize) -> usize {
        tdasweep::FeatureLayout::new(rows, cols, channels, &self.inner).len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepConfig(thresholds={:?}, interval_width={}, workers={:?})",
            self.inner.thresholds(),
            self.inner.interval_width(),
            self.inner.workers()
        )
    }
}

/// Coerces any integer array-like to a C-contiguous int64 array.
fn int_array<'py>(obj: &Bound<'py, PyAny>) -> PyResult<PyReadonlyArrayDyn<'py, i64>> {
    let np = obj.py().import("numpy")?;
    let arr = np.call_method1("asarray", (obj,))?;
    let kind: String = arr.getattr("dtype")?.getattr("kind")?.extract()?;
    if !matches!(kind.as_str(), "i" | "u" | "b") {
        let dtype = arr.getattr("dtype")?.str()?.to_string();
        return Err(PyTypeError::new_err(format!(
            "expected an integer array, got dtype {dtype}"
        )));
    }
    let arr = np.call_method1("ascontiguousarray", (arr, "int64"))?;
    Ok(arr.extract()?)
}

fn to_pixels(values: &[i64]) -> PyResult<Vec<u8>> {
    values
        .iter()
        .map(|&v| {
            u8::try_from(v).map_err(|_| {
                PyValueError::new_err(format!("invalid argument: intensity {v} outside 0..=255"))
            })
        })
        .collect()
}

/// `(rows, cols, channels)` from a 2-D `(r, s)` or 3-D `(r, s, c)` shape.
fn image_shape(shape: &[usize]) -> PyResult<(usize, usize, usize)> {
    match *shape {
        [r, s] => Ok((r, s, 1)),
        [r, s, c] => Ok((r, s, c)),
        _ => Err(PyValueError::new_err(format!(
            "invalid argument: expected an (rows, cols[, channels]) array, got shape {shape:?}"
        ))),
    }
}

/// Features of one image given as an `(rows, cols)` or `(rows, cols, channels)`
/// integer array.
#[pyfunction]
fn extract<'py>(
    py: Python<'py>,
    pixels: &Bound<'py, PyAny>,
    config: &PySweepConfig,
) -> PyResult<Bound<'py, PyArray1<u32>>> {
    let arr = int_array(pixels)?;
    let (r, s, c) = image_shape(arr.shape())?;
    let px = to_pixels(arr.as_slice()?)?;
    let image = GrayImage::new(r, s, c, px).map_err(value_error)?;
    let cfg = &config.inner;
    let fv = py
        .detach(|| tdasweep::extract(&image, cfg))
        .map_err(value_error)?;
    Ok(fv.values.into_pyarray(py))
}

/// Features of a batch given as an `(n, rows, cols)` or
/// `(n, rows, cols, channels)` integer array; one output row per image.
#[pyfunction]
#[pyo3(signature = (pixels, config, workers = None))]
fn batch_extract<'py>(
    py: Python<'py>,
    pixels: &Bound<'py, PyAny>,
    config: &PySweepConfig,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyArray2<u32>>> {
    let arr = int_array(pixels)?;
    let shape = arr.shape();
    let Some((&n, rest)) = shape.split_first() else {
        return Err(PyValueError::new_err(
            "invalid argument: expected a batch array, got a scalar",
        ));
    };
    let (r, s, c) = image_shape(rest)?;
    let px = to_pixels(arr.as_slice()?)?;
    let per = r * s * c;
    let images = (0..n)
        .map(|i| GrayImage::new(r, s, c, px[i * per..(i + 1) * per].to_vec()))
        .collect::<tdasweep::Result<Vec<_>>>()
        .map_err(value_error)?;
    let cfg = match workers {
        Some(w) => config
            .inner
            .clone()
            .with_workers(Some(w))
            .map_err(value_error)?,
        None => config.inner.clone(),
    };
    let (matrix, _) = py
        .detach(|| {
            let ds = Dataset::new(images, None)?;
            tdasweep::batch_extract(&ds, &cfg)
        })
        .map_err(value_error)?;
    let (rows, cols) = (matrix.n_rows(), matrix.n_cols());
    let flat = matrix.values().to_vec().into_pyarray(py);
    flat.reshape([rows, cols])
}

#[pymodule]
#[pyo3(name = "tdasweep")]
fn tdasweep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", tdasweep::VERSION)?;
    m.add_class::<PySweepConfig>()?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(batch_extract, m)?)?;
    Ok(())
}
