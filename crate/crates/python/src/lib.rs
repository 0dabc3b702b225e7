//! Python bindings. Points are `(v, z, t)` tuples of two float lists and a
//! float; vectors are float lists.

use ::damek_ricci as dr;
use dr::cli::report::CheckResult;
use dr::cli::suites::{self, SuiteOptions};
use dr::clifford_algebra::{build_algebra, j2_satisfied, predict_j2_set, validate_clifford_with, CliffordSpec, IrrepKind};
use dr::isoparametric::{self, SurfaceKind};
use dr::model::{self, AffinePoint, Point};
use dr::{DamekRicciAlgebra, Vector};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type PyPoint = (Vec<f64>, Vec<f64>, f64);

fn err(e: dr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vector(x: Vec<f64>) -> Vector {
    Vector::from_vec(x)
}

fn affine((v, z, t): PyPoint) -> AffinePoint {
    AffinePoint::new(vector(v), vector(z), t)
}

fn point(p: PyPoint) -> PyResult<Point> {
    affine(p).to_point().map_err(err)
}

fn kind(name: &str) -> PyResult<IrrepKind> {
    match name {
        "d" => Ok(IrrepKind::D),
        "d1" => Ok(IrrepKind::D1),
        "d2" => Ok(IrrepKind::D2),
        other => Err(PyValueError::new_err(format!("unknown module type {other:?}"))),
    }
}

fn check_dict<'py>(py: Python<'py>, r: &CheckResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &r.name)?;
    d.set_item("max_residual", r.max_residual)?;
    d.set_item("mean_residual", r.mean_residual)?;
    d.set_item("samples", r.samples)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// A Damek–Ricci space built from a sum of irreducible Clifford modules.
#[pyclass(frozen)]
struct Space {
    spec: CliffordSpec,
    alg: DamekRicciAlgebra,
}

#[pymethods]
impl Space {
    /// `modules` lists `(type, multiplicity)` pairs with type in
    /// {"d", "d1", "d2"}.
    #[new]
    fn new(m: usize, modules: Vec<(String, usize)>) -> PyResult<Self> {
        let mods = modules.iter().map(|(k, mult)| Ok((kind(k)?, *mult))).collect::<PyResult<Vec<_>>>()?;
        let spec = CliffordSpec::tagged(m, &mods);
        let alg = build_algebra(&spec).map_err(err)?;
        Ok(Self { spec, alg })
    }

    #[staticmethod]
    fn from_toml(path: &str) -> PyResult<Self> {
        let cfg = dr::cli::SpaceConfig::load(std::path::Path::new(path)).map_err(err)?;
        let spec = cfg.to_spec().map_err(err)?;
        let alg = build_algebra(&spec).map_err(err)?;
        Ok(Self { spec, alg })
    }

    #[getter]
    fn m(&self) -> usize {
        self.alg.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.alg.n()
    }

    fn __repr__(&self) -> String {
        format!("Space(m={}, n={})", self.alg.m(), self.alg.n())
    }

    /// Named maximum residuals of the Clifford relations.
    #[pyo3(signature = (samples=1000, seed=0))]
    fn validate(&self, samples: usize, seed: u64) -> Vec<(String, f64)> {
        let report = validate_clifford_with(&self.alg, samples, &mut dr::sampling::rng(seed));
        report.residuals.into_iter().map(|r| (r.name, r.value)).collect()
    }

    fn bracket(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.alg.bracket_v(&vector(u), &vector(v)).map_err(err)?.iter().copied().collect())
    }

    fn distance(&self, x: PyPoint, y: PyPoint) -> PyResult<f64> {
        Ok(model::distance(&self.alg, &point(x)?, &point(y)?))
    }

    fn multiply(&self, p: PyPoint, q: PyPoint) -> PyResult<PyPoint> {
        let r = model::multiply(&self.alg, &point(p)?, &point(q)?);
        Ok((r.v.iter().copied().collect(), r.z.iter().copied().collect(), r.t()))
    }

    /// Distorted distance `D_{x0}(x)`; `x0` may have any `t`.
    fn eval_d(&self, x0: PyPoint, x: PyPoint) -> PyResult<f64> {
        Ok(isoparametric::eval_d(&self.alg, &affine(x0), &point(x)?))
    }

    fn eval_dstar(&self, base: PyPoint, v: Vec<f64>, s: f64, x: PyPoint) -> PyResult<f64> {
        Ok(isoparametric::eval_dstar(&self.alg, &point(base)?, &vector(v), s, &point(x)?))
    }

    /// `(flag, residual)` of the J²-condition.
    #[pyo3(signature = (v, tol=dr::focal::J2_TOL))]
    fn j2_satisfied(&self, v: Vec<f64>, tol: f64) -> (bool, f64) {
        j2_satisfied(&self.alg, &vector(v), tol)
    }

    fn predict_j2(&self, v: Vec<f64>) -> PyResult<bool> {
        predict_j2_set(&self.spec, &vector(v)).map_err(err)
    }

    /// Run a named suite: "validate", "verify-iso", "geodesic", "j2-scan"
    /// or "focal-check".
    #[pyo3(signature = (name, seed=0, samples=None))]
    fn run_suite<'py>(
        &self,
        py: Python<'py>,
        name: &str,
        seed: u64,
        samples: Option<usize>,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let opts = SuiteOptions { samples, ..SuiteOptions::with_seed(seed) };
        let results = py
            .detach(|| match name {
                "validate" => Ok(suites::validate(&self.alg, &opts)),
                "verify-iso" => suites::verify_iso(&self.alg, &opts),
                "geodesic" => suites::geodesic(&self.alg, &opts),
                "j2-scan" => suites::j2_scan(&self.spec, &self.alg, &opts),
                "focal-check" => suites::focal_check(&self.alg, &opts),
                other => Err(dr::Error::InvalidInput(format!("unknown suite {other:?}"))),
            })
            .map_err(err)?;
        results.iter().map(|r| check_dict(py, r)).collect()
    }
}

/// Cross-ratio of four points of the projective line; `inf` is allowed.
#[pyfunction]
fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> PyResult<f64> {
    dr::geodesic::cross_ratio(a.into(), b.into(), c.into(), d.into()).map_err(err)
}

/// Closed-form mean curvature of a sphere, horosphere or tube of radius `r`.
#[pyfunction]
fn mean_curvature(kind: &str, r: f64, m: usize, n: usize) -> PyResult<f64> {
    let kind = match kind {
        "sphere" => SurfaceKind::Sphere,
        "horosphere" => SurfaceKind::Horosphere,
        "tube" => SurfaceKind::Tube,
        other => return Err(PyValueError::new_err(format!("unknown surface kind {other:?}"))),
    };
    Ok(isoparametric::mean_curvature(kind, r, m, n))
}

#[pymodule]
fn damek_ricci(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(mean_curvature, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
