//! Python bindings: ideals, group orders, image specs and degree reports.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use projdiv_core::cli::parse_ring;
use projdiv_core::group::DEFAULT_CAP;
use projdiv_core::{degree, specs, Error, Ideal};

create_exception!(projdiv, ProjdivError, PyException);

fn err(e: Error) -> PyErr {
    ProjdivError::new_err(e.to_string())
}

fn ideal(s: &str) -> PyResult<Ideal> {
    s.parse().map_err(err)
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

/// Prime factorization as `[(prime, exponent)]`. Ideals are written `12`
/// or `q=3;[1,0,1]` for 1 + T^2 over F_3.
#[pyfunction]
fn factor(a: &str) -> PyResult<Vec<(String, u32)>> {
    let a = ideal(a)?;
    let factors = a.factor().map_err(err)?;
    Ok(factors.iter().map(|(p, e)| (p.to_string(), *e)).collect())
}

/// `(a11, a12, a2)` with a = a11 * a12 * a2 relative to the conductor m.
#[pyfunction]
fn decompose(a: &str, m: &str) -> PyResult<(String, String, String)> {
    let d = ideal(a)?.decompose(&ideal(m)?).map_err(err)?;
    Ok((d.a11.to_string(), d.a12.to_string(), d.a2.to_string()))
}

#[pyfunction]
fn units_order(a: &str) -> PyResult<BigUint> {
    projdiv_core::units_order(&ideal(a)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, r = 2))]
fn gl_order(a: &str, r: usize) -> PyResult<BigUint> {
    projdiv_core::gl_order(r, &ideal(a)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, r = 2))]
fn pgl_order(a: &str, r: usize) -> PyResult<BigUint> {
    projdiv_core::pgl_order(r, &ideal(a)?).map_err(err)
}

/// Truncated product over primes of norm at most `norm_bound`, as a
/// `fractions.Fraction`. `ring` is `Z` or `F<q>[T]`.
#[pyfunction]
#[pyo3(signature = (norm_bound, r = 2, ring = "Z"))]
fn pgl_lower_bound_constant(py: Python<'_>, norm_bound: u64, r: usize, ring: &str) -> PyResult<Py<PyAny>> {
    let ring = parse_ring(ring).map_err(err)?;
    let c = projdiv_core::pgl_lower_bound_constant(r, &ring, norm_bound).map_err(err)?;
    Ok(fraction(py, &c)?.unbind())
}

#[pyclass(frozen, get_all)]
struct DegreeReport {
    a: String,
    norm: BigUint,
    group_order: BigUint,
    scalar_order: BigUint,
    degree: BigUint,
    ratio_num: BigUint,
    ratio_den: BigUint,
    method: String,
}

impl DegreeReport {
    fn from_core(r: &degree::DegreeReport) -> Self {
        DegreeReport {
            a: r.a.to_string(),
            norm: r.norm.clone(),
            group_order: r.group_order.clone(),
            scalar_order: r.scalar_order.clone(),
            degree: r.degree.clone(),
            ratio_num: r.ratio.numer().magnitude().clone(),
            ratio_den: r.ratio.denom().magnitude().clone(),
            method: r.method.to_string(),
        }
    }
}

#[pymethods]
impl DegreeReport {
    /// `degree / norm^(r^2 - 1)` as a `fractions.Fraction`.
    #[getter]
    fn ratio<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("fractions")?
            .getattr("Fraction")?
            .call1((self.ratio_num.clone(), self.ratio_den.clone()))
    }

    fn __repr__(&self) -> String {
        format!(
            "DegreeReport(a={}, degree={}, ratio={}/{}, method={})",
            self.a, self.degree, self.ratio_num, self.ratio_den, self.method
        )
    }
}

#[pyclass(frozen, get_all)]
struct Transcript {
    a: String,
    a11: String,
    a12: String,
    a2: String,
    passed: bool,
    /// `(name, passed, detail)` per check.
    checks: Vec<(String, bool, String)>,
    text: String,
}

#[pymethods]
impl Transcript {
    fn __str__(&self) -> String {
        self.text.clone()
    }
}

/// Reports, minimum ratio, its argmin, and ideals violating the bound.
type Scan = (Vec<DegreeReport>, Py<PyAny>, String, Vec<String>);

#[pyclass(frozen)]
struct GaloisImageSpec {
    inner: degree::GaloisImageSpec,
}

#[pymethods]
impl GaloisImageSpec {
    #[staticmethod]
    #[pyo3(signature = (text, cap = DEFAULT_CAP))]
    fn from_json(text: &str, cap: usize) -> PyResult<Self> {
        let inner = degree::GaloisImageSpec::from_json(text, cap).map_err(err)?;
        Ok(GaloisImageSpec { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, cap = DEFAULT_CAP))]
    fn load(path: PathBuf, cap: usize) -> PyResult<Self> {
        let inner = degree::GaloisImageSpec::load(&path, cap).map_err(err)?;
        Ok(GaloisImageSpec { inner })
    }

    /// One of the example specs shipped with the library.
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        let built = specs::bundled(name).ok_or_else(|| ProjdivError::new_err(format!("no bundled spec {name:?}")))?;
        Ok(GaloisImageSpec {
            inner: built.map_err(err)?,
        })
    }

    #[staticmethod]
    fn bundled_names() -> Vec<&'static str> {
        specs::BUNDLED.iter().map(|(n, _)| *n).collect()
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    #[getter]
    fn ring(&self) -> String {
        self.inner.ring().to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn conductor(&self) -> String {
        self.inner.conductor().to_string()
    }

    /// Order of the image mod the conductor.
    #[getter]
    fn order(&self) -> usize {
        self.inner.image().order()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn j_degree(&self, py: Python<'_>, a: &str) -> PyResult<DegreeReport> {
        let a = Ideal::parse_in(self.inner.ring(), a).map_err(err)?;
        let report = py.detach(|| degree::j_degree(&self.inner, &a)).map_err(err)?;
        Ok(DegreeReport::from_core(&report))
    }

    #[pyo3(signature = (a, cap = DEFAULT_CAP))]
    fn j_degree_bruteforce(&self, py: Python<'_>, a: &str, cap: usize) -> PyResult<DegreeReport> {
        let a = Ideal::parse_in(self.inner.ring(), a).map_err(err)?;
        let report = py
            .detach(|| degree::j_degree_bruteforce(&self.inner, &a, cap))
            .map_err(err)?;
        Ok(DegreeReport::from_core(&report))
    }

    #[pyo3(signature = (a, cap = DEFAULT_CAP))]
    fn verify(&self, py: Python<'_>, a: &str, cap: usize) -> PyResult<Transcript> {
        let a = Ideal::parse_in(self.inner.ring(), a).map_err(err)?;
        let t = py
            .detach(|| degree::goursat_verify(&self.inner, &a, cap))
            .map_err(err)?;
        let d = &t.decomposition;
        Ok(Transcript {
            a: t.a.to_string(),
            a11: d.a11.to_string(),
            a12: d.a12.to_string(),
            a2: d.a2.to_string(),
            passed: t.passed(),
            checks: t
                .checks
                .iter()
                .map(|c| (c.name.to_string(), c.passed, c.detail.clone()))
                .collect(),
            text: t.to_string(),
        })
    }

    /// `(reports, min_ratio, argmin, violations)` over all ideals of norm at
    /// most `norm_bound`.
    fn bound_scan(&self, py: Python<'_>, norm_bound: u64) -> PyResult<Scan> {
        let scan = py.detach(|| degree::bound_scan(&self.inner, norm_bound)).map_err(err)?;
        Ok((
            scan.rows.iter().map(DegreeReport::from_core).collect(),
            fraction(py, &scan.min_ratio)?.unbind(),
            scan.argmin.to_string(),
            scan.violations.iter().map(|a| a.to_string()).collect(),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "GaloisImageSpec({:?}, ring={}, r={}, m={}, order={})",
            self.inner.label(),
            self.inner.ring(),
            self.inner.rank(),
            self.inner.conductor(),
            self.inner.image().order()
        )
    }
}

#[pymodule]
#[pyo3(name = "projdiv")]
fn projdiv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ProjdivError", m.py().get_type::<ProjdivError>())?;
    m.add_class::<GaloisImageSpec>()?;
    m.add_class::<DegreeReport>()?;
    m.add_class::<Transcript>()?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(units_order, m)?)?;
    m.add_function(wrap_pyfunction!(gl_order, m)?)?;
    m.add_function(wrap_pyfunction!(pgl_order, m)?)?;
    m.add_function(wrap_pyfunction!(pgl_lower_bound_constant, m)?)?;
    Ok(())
}
