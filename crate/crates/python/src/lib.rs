//! Python module `shearsense`. Images cross the boundary as nested lists of
//! floats (row-major); reports as JSON strings.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::shearsense as core;
use core::filter_bank::{self, WaveletCoefficients};
use core::l1::{self, LinearMap};
use core::phantoms::{self, PhantomKind};
use core::pipeline::{self, PipelineOptions};
use core::sampling;
use core::spectral::RealGrid;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_grid(rows: Vec<Vec<f64>>) -> PyResult<RealGrid> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged image rows"));
    }
    RealGrid::new(r, c, rows.into_iter().flatten().collect()).map_err(err)
}

fn from_grid(g: &RealGrid) -> Vec<Vec<f64>> {
    g.data().chunks(g.cols()).map(<[f64]>::to_vec).collect()
}

fn options(max_iterations: Option<usize>, tolerance: Option<f64>) -> PipelineOptions {
    let mut o = PipelineOptions::default();
    if let Some(m) = max_iterations {
        o.solver.max_iterations = m;
    }
    if let Some(t) = tolerance {
        o.solver.relative_tolerance = t;
    }
    o
}

#[pyclass(name = "PhantomSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPhantomSpec(phantoms::PhantomSpec);

#[pymethods]
impl PyPhantomSpec {
    /// Preset phantom: `disk`, `ellipse` or `two-region-smooth`.
    #[staticmethod]
    #[pyo3(signature = (kind, size=256))]
    fn preset(kind: &str, size: usize) -> PyResult<Self> {
        let kind = match kind {
            "disk" => PhantomKind::Disk,
            "ellipse" => PhantomKind::Ellipse,
            "two-region-smooth" => PhantomKind::TwoRegionSmooth,
            other => return Err(PyValueError::new_err(format!("unknown phantom kind {other:?}"))),
        };
        Ok(Self(phantoms::PhantomSpec::preset(kind, size)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        phantoms::PhantomSpec::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    fn render(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_grid(&phantoms::render(&self.0).map_err(err)?))
    }
}

#[pyclass(name = "SamplingMask", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMask(sampling::SamplingMask);

#[pymethods]
impl PyMask {
    /// Directional mask at finest scale `finest_scale` hitting `ratio` of the grid.
    #[staticmethod]
    #[pyo3(signature = (size, finest_scale, ratio, seed=0))]
    fn directional(size: usize, finest_scale: u32, ratio: f64, seed: u64) -> PyResult<Self> {
        sampling::draw_mask_for_ratio(finest_scale, size, ratio, seed).map(Self).map_err(err)
    }

    /// Directional mask with `m` draws per shear and cone.
    #[staticmethod]
    #[pyo3(signature = (size, finest_scale, m, seed=0))]
    fn per_shear(size: usize, finest_scale: u32, m: usize, seed: u64) -> PyResult<Self> {
        sampling::draw_mask(finest_scale, size, m, seed).map(Self).map_err(err)
    }

    /// Radial-density baseline mask.
    #[staticmethod]
    #[pyo3(signature = (size, ratio, seed=0))]
    fn radial(size: usize, ratio: f64, seed: u64) -> PyResult<Self> {
        sampling::baseline_radial_mask(size, ratio, seed).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (finest_scale, rho=sampling::DEFAULT_RHO, seed=0))]
    fn theory(finest_scale: u32, rho: f64, seed: u64) -> PyResult<Self> {
        sampling::draw_theory_mask(finest_scale, rho, seed).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        sampling::SamplingMask::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn cardinality(&self) -> usize {
        self.0.cardinality()
    }

    fn kept_fraction(&self) -> f64 {
        self.0.kept_fraction()
    }

    /// Sampled frequencies as centered `(n1, n2)` pairs.
    fn points(&self) -> Vec<(i64, i64)> {
        self.0.union_points().into_iter().map(|[a, b]| (a, b)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.cardinality()
    }
}

#[pyclass(name = "Measurements", frozen)]
struct PyMeasurements(pipeline::MeasurementSet);

#[pymethods]
impl PyMeasurements {
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn mask(&self) -> PyMask {
        PyMask(self.0.mask().clone())
    }
}

#[pyclass(name = "FilterBank", frozen)]
struct PyFilterBank(filter_bank::DirectionalFilterSet);

#[pymethods]
impl PyFilterBank {
    #[new]
    fn new(size: usize, finest_scale: u32) -> PyResult<Self> {
        filter_bank::build_directional_filters(size, finest_scale).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// `(q, level, cone)` for every filter.
    fn shears(&self) -> Vec<(i64, u32, String)> {
        self.0
            .filters()
            .iter()
            .map(|f| (f.shear.q(), f.shear.level(), format!("{:?}", f.cone).to_lowercase()))
            .collect()
    }

    /// `Σ G̃ ⋆ G ⋆ u`, which equals `u`.
    fn analysis_synthesis(&self, image: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_grid(&self.0.analysis_synthesis(&to_grid(image)?).map_err(err)?))
    }
}

#[pyfunction]
fn measure(image: Vec<Vec<f64>>, mask: &PyMask) -> PyResult<PyMeasurements> {
    pipeline::forward_measure(&to_grid(image)?, &mask.0).map(PyMeasurements).map_err(err)
}

/// Reconstructs with scheme `scheme` (e.g. `shear08`, `wave01`). Returns the
/// image and the report as JSON.
#[pyfunction]
#[pyo3(signature = (measurements, scheme, truth=None, max_iterations=None, tolerance=None))]
fn reconstruct(
    py: Python<'_>,
    measurements: &PyMeasurements,
    scheme: &str,
    truth: Option<Vec<Vec<f64>>>,
    max_iterations: Option<usize>,
    tolerance: Option<f64>,
) -> PyResult<(Vec<Vec<f64>>, String)> {
    let scheme: pipeline::Scheme = scheme.parse().map_err(err)?;
    let truth = truth.map(to_grid).transpose()?;
    let opts = options(max_iterations, tolerance);
    let meas = &measurements.0;
    let (img, mut report) = py
        .detach(|| match scheme {
            pipeline::Scheme::Directional { finest_scale } => {
                let f = filter_bank::build_directional_filters(meas.size(), finest_scale)?;
                pipeline::reconstruct_directional(meas, &f, &opts)
            }
            _ => pipeline::reconstruct_wavelet(meas, scheme, &opts),
        })
        .map_err(err)?;
    if let Some(t) = &truth {
        report.psnr_db = Some(pipeline::psnr_against(t, &img).map_err(err)?);
    }
    Ok((from_grid(&img), report.to_json().map_err(err)?))
}

/// PSNR table as CSV. Without timing the runtime column is `NA`.
#[pyfunction]
#[pyo3(signature = (image, schemes, ratios, seeds, timing=false, max_iterations=None, tolerance=None))]
#[allow(clippy::too_many_arguments)]
fn compare(
    py: Python<'_>,
    image: Vec<Vec<f64>>,
    schemes: Vec<String>,
    ratios: Vec<f64>,
    seeds: Vec<u64>,
    timing: bool,
    max_iterations: Option<usize>,
    tolerance: Option<f64>,
) -> PyResult<String> {
    let u = to_grid(image)?;
    let schemes = schemes
        .iter()
        .map(|s| s.parse::<pipeline::Scheme>())
        .collect::<core::Result<Vec<_>>>()
        .map_err(err)?;
    let opts = options(max_iterations, tolerance);
    let table = py
        .detach(|| pipeline::compare(&u, &schemes, &ratios, &seeds, &opts))
        .map_err(err)?;
    Ok(table.to_csv(timing))
}

#[pyfunction]
fn psnr(truth: Vec<Vec<f64>>, estimate: Vec<Vec<f64>>) -> PyResult<f64> {
    pipeline::psnr_against(&to_grid(truth)?, &to_grid(estimate)?).map_err(err)
}

/// Shears of the finest scale `finest_scale` as `(q, level, value)`.
#[pyfunction]
fn shear_set(finest_scale: u32) -> PyResult<Vec<(i64, u32, f64)>> {
    Ok(filter_bank::shear_set(finest_scale)
        .map_err(err)?
        .into_iter()
        .map(|s| (s.q(), s.level(), s.value()))
        .collect())
}

#[pyfunction]
fn awt_forward(image: Vec<Vec<f64>>, depth: u32) -> PyResult<Vec<Vec<f64>>> {
    Ok(from_grid(&filter_bank::awt_forward(&to_grid(image)?, depth).map_err(err)?.field))
}

#[pyfunction]
fn awt_inverse(coefficients: Vec<Vec<f64>>, depth: u32) -> PyResult<Vec<Vec<f64>>> {
    let c = WaveletCoefficients {
        depth,
        field: to_grid(coefficients)?,
    };
    Ok(from_grid(&filter_bank::awt_inverse(&c).map_err(err)?))
}

fn dense(rows: Vec<Vec<Complex64>>) -> PyResult<l1::DenseMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    l1::DenseMatrix::from_rows(r, c, &data).map_err(err)
}

/// `min ‖x‖₁ s.t. Ax = y`. Returns `(x, converged, iterations)`.
#[pyfunction]
#[pyo3(signature = (matrix, y, max_iterations=None))]
fn basis_pursuit(
    matrix: Vec<Vec<Complex64>>,
    y: Vec<Complex64>,
    max_iterations: Option<usize>,
) -> PyResult<(Vec<Complex64>, bool, usize)> {
    let a = dense(matrix)?;
    if y.len() != a.output_dim() {
        return Err(PyValueError::new_err(format!("y has {} entries, expected {}", y.len(), a.output_dim())));
    }
    let mut opts = l1::SolverOptions::default();
    if let Some(m) = max_iterations {
        opts.max_iterations = m;
    }
    let (x, report) = l1::basis_pursuit(&a, &y, &opts).map_err(err)?;
    Ok((x, report.converged, report.iterations))
}

/// Exhaustive restricted isometry constant `δ_k`.
#[pyfunction]
fn rip_constant(matrix: Vec<Vec<Complex64>>, k: usize) -> PyResult<f64> {
    Ok(l1::rip_constant(&dense(matrix)?, k).map_err(err)?.delta)
}

#[pymodule]
#[pyo3(name = "shearsense")]
fn shearsense_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", core::VERSION)?;
    m.add_class::<PyPhantomSpec>()?;
    m.add_class::<PyMask>()?;
    m.add_class::<PyMeasurements>()?;
    m.add_class::<PyFilterBank>()?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(shear_set, m)?)?;
    m.add_function(wrap_pyfunction!(awt_forward, m)?)?;
    m.add_function(wrap_pyfunction!(awt_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(basis_pursuit, m)?)?;
    m.add_function(wrap_pyfunction!(rip_constant, m)?)?;
    Ok(())
}
