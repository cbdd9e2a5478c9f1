//! Python bindings. Exact values cross the boundary as `p/q` strings.

use std::collections::HashMap;

use falconer_core::finite_field::{self, CensusConfig, FFSet, PrimeField, SetFamily};
use falconer_core::fractal::{self, CantorSpec};
use falconer_core::rational::{self, Rational};
use falconer_core::reduction::{self, SplitSpec};
use falconer_core::threshold::{self, ThresholdChain};
use falconer_core::{report, Error, MPoly, Quadratic3};
use pyo3::basic::CompareOp;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::Value;

const DEFAULT_BUDGET: u128 = finite_field::DEFAULT_BUDGET;
const DEFAULT_BOX_BUDGET: u128 = fractal::DEFAULT_BOX_BUDGET;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn parse_rational(s: &str) -> PyResult<Rational> {
    rational::parse(s).map_err(err)
}

fn quadratic(src: &str) -> PyResult<Quadratic3> {
    Quadratic3::parse(src).map_err(err)
}

/// Sparse polynomial with exact rational coefficients.
#[pyclass(name = "Polynomial", module = "falconer", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: MPoly,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        Ok(PyPolynomial {
            inner: src.parse().map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }

    fn __add__(&self, other: &Self) -> Self {
        PyPolynomial {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyPolynomial {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyPolynomial {
            inner: &self.inner * &other.inner,
        }
    }

    fn __neg__(&self) -> Self {
        PyPolynomial {
            inner: -self.inner.clone(),
        }
    }

    fn __pow__(&self, exp: u32, _modulo: Option<u32>) -> Self {
        PyPolynomial {
            inner: self.inner.pow(exp),
        }
    }

    fn __richcmp__(&self, other: &Self, op: CompareOp) -> PyResult<bool> {
        match op {
            CompareOp::Eq => Ok(self.inner == other.inner),
            CompareOp::Ne => Ok(self.inner != other.inner),
            _ => Err(PyValueError::new_err("polynomials are not ordered")),
        }
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.to_string().hash(&mut h);
        h.finish()
    }

    /// Variables the polynomial actually uses.
    fn variables(&self) -> Vec<String> {
        self.inner.used_vars()
    }

    fn degree(&self) -> u64 {
        self.inner.total_degree()
    }

    fn derivative(&self, var: &str) -> PyResult<Self> {
        let d = if self.inner.vars().iter().any(|v| v == var) {
            self.inner.partial_derivative(var).map_err(err)?
        } else {
            MPoly::zero()
        };
        Ok(PyPolynomial { inner: d })
    }

    /// Replaces variables by polynomials given as strings.
    fn substitute(&self, bindings: HashMap<String, String>) -> PyResult<Self> {
        let map = bindings
            .into_iter()
            .map(|(k, v)| Ok((k, v.parse::<MPoly>().map_err(err)?)))
            .collect::<PyResult<_>>()?;
        Ok(PyPolynomial {
            inner: self.inner.substitute(&map),
        })
    }

    /// Exact value at a point given as `{"x": "1/2", ...}`.
    fn evaluate(&self, point: HashMap<String, String>) -> PyResult<String> {
        let map = point
            .into_iter()
            .map(|(k, v)| Ok((k, parse_rational(&v)?)))
            .collect::<PyResult<_>>()?;
        Ok(rational::format(&self.inner.eval(&map).map_err(err)?))
    }
}

/// `a xy + b xz + c yz + d x² + e y² + g z² + h x + i y + j z + k0`.
#[pyclass(name = "Quadratic", module = "falconer", frozen)]
struct PyQuadratic {
    inner: Quadratic3,
}

#[pymethods]
impl PyQuadratic {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        Ok(PyQuadratic {
            inner: quadratic(src)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Quadratic('{}')", self.inner)
    }

    /// `[a, b, c, d, e, g, h, i, j, k0]` as exact strings.
    fn coefficients(&self) -> Vec<String> {
        self.inner.coefficients().iter().map(rational::format).collect()
    }

    fn polynomial(&self) -> PyPolynomial {
        PyPolynomial {
            inner: self.inner.to_poly(),
        }
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let c = falconer_core::classify(&self.inner).map_err(err)?;
        to_py(py, &report::classification(&self.inner, &c))
    }

    fn reduce<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = reduction::reduce(&self.inner).map_err(err)?;
        to_py(py, &report::reduction(&self.inner, &r))
    }
}

/// Classification report for a quadratic given as text.
#[pyfunction]
fn classify<'py>(py: Python<'py>, polynomial: &str) -> PyResult<Bound<'py, PyAny>> {
    PyQuadratic::new(polynomial)?.classify(py)
}

/// Lifting maps, bad set and identity check for a Falconer-type quadratic.
#[pyfunction]
fn reduce<'py>(py: Python<'py>, polynomial: &str) -> PyResult<Bound<'py, PyAny>> {
    PyQuadratic::new(polynomial)?.reduce(py)
}

/// Bordered Monge-Ampere determinant, as a polynomial string.
#[pyfunction]
#[pyo3(signature = (psi, u = None, v = None))]
fn monge_ampere(psi: &str, u: Option<[String; 3]>, v: Option<[String; 3]>) -> PyResult<String> {
    let psi: MPoly = psi.parse().map_err(err)?;
    let split = match (u, v) {
        (None, None) => SplitSpec::standard(),
        (u, v) => {
            let std = SplitSpec::standard();
            SplitSpec::new(u.unwrap_or(std.u), v.unwrap_or(std.v)).map_err(err)?
        }
    };
    Ok(reduction::monge_ampere(&psi, &split).map_err(err)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (polynomial, p, a, b, c, budget = DEFAULT_BUDGET))]
fn image_set(
    py: Python<'_>,
    polynomial: &str,
    p: u64,
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    budget: u128,
) -> PyResult<Vec<u64>> {
    let f = quadratic(polynomial)?;
    let field = PrimeField::new(p).map_err(err)?;
    let sets = [a, b, c].map(|s| FFSet::new(s, &field));
    let [a, b, c] = sets;
    let (a, b, c) = (a.map_err(err)?, b.map_err(err)?, c.map_err(err)?);
    py.detach(|| finite_field::image_set(&f, &a, &b, &c, &field, budget))
        .map(|s| s.elements().to_vec())
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (polynomial, p, n, trials = 50, family = "uniform-random", seed = 0, budget = DEFAULT_BUDGET, csv = false))]
#[allow(clippy::too_many_arguments)]
fn expander_census<'py>(
    py: Python<'py>,
    polynomial: &str,
    p: u64,
    n: u64,
    trials: u64,
    family: &str,
    seed: u64,
    budget: u128,
    csv: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let f = quadratic(polynomial)?;
    let field = PrimeField::new(p).map_err(err)?;
    let cfg = CensusConfig {
        n,
        trials,
        family: family.parse::<SetFamily>().map_err(err)?,
        seed,
        budget,
    };
    let rep = py
        .detach(|| finite_field::expander_census(&f, &field, &cfg))
        .map_err(err)?;
    if csv {
        Ok(PyString::new(py, &rep.to_csv()).into_any())
    } else {
        to_py(py, &report::census(&f, &rep))
    }
}

/// Whether `(x − y)² + (z − t)²` over `A⁴` covers `F_p`.
#[pyfunction]
#[pyo3(signature = (a, p, budget = DEFAULT_BUDGET))]
fn cover_check_distance(a: Vec<u64>, p: u64, budget: u128) -> PyResult<bool> {
    let field = PrimeField::new(p).map_err(err)?;
    let set = FFSet::new(a, &field).map_err(err)?;
    finite_field::cover_check_distance(&set, &field, budget).map_err(err)
}

/// Depth-`depth` generator intervals as `(lo, hi)` string pairs.
#[pyfunction]
fn cantor_cover(base: u32, digits: Vec<u32>, depth: u32) -> PyResult<Vec<(String, String)>> {
    let spec = CantorSpec::new(base, &digits, depth).map_err(err)?;
    let cover = fractal::cantor_cover(&spec).map_err(err)?;
    Ok(cover
        .intervals()
        .iter()
        .map(|(lo, hi)| (rational::format(lo), rational::format(hi)))
        .collect())
}

/// Exact length of the image of `f` over covers given as
/// `cantor:<base>:<digits>`, `point:<r>`, `interval:<lo>:<hi>` or `unit`.
#[pyfunction]
#[pyo3(signature = (polynomial, a, b, c, depth = 6, budget = DEFAULT_BOX_BUDGET))]
fn image_measure(
    py: Python<'_>,
    polynomial: &str,
    a: &str,
    b: &str,
    c: &str,
    depth: u32,
    budget: u128,
) -> PyResult<String> {
    let f = quadratic(polynomial)?;
    let covers = [a, b, c].map(|s| fractal::parse_cover(s, depth));
    let [a, b, c] = covers;
    let (a, b, c) = (a.map_err(err)?, b.map_err(err)?, c.map_err(err)?);
    py.detach(|| fractal::image_measure(&f, [&a, &b, &c], budget))
        .map(|m| rational::format(&m))
        .map_err(err)
}

/// Near-zero mass table over the same covers on both sides.
#[pyfunction]
#[pyo3(signature = (polynomial, a, b, c, epsilons, depth = 6, budget = DEFAULT_BOX_BUDGET))]
#[allow(clippy::too_many_arguments)]
fn near_zero_mass<'py>(
    py: Python<'py>,
    polynomial: &str,
    a: &str,
    b: &str,
    c: &str,
    epsilons: Vec<String>,
    depth: u32,
    budget: u128,
) -> PyResult<Bound<'py, PyAny>> {
    let f = quadratic(polynomial)?;
    let covers = [a, b, c].map(|s| fractal::parse_cover(s, depth));
    let [a, b, c] = covers;
    let (a, b, c) = (a.map_err(err)?, b.map_err(err)?, c.map_err(err)?);
    let eps = epsilons
        .iter()
        .map(|e| parse_rational(e))
        .collect::<PyResult<Vec<_>>>()?;
    let side = [&a, &b, &c];
    let rows = py
        .detach(|| fractal::near_zero_mass_table(&f, side, side, &eps, budget))
        .map_err(err)?;
    to_py(py, &report::near_zero_mass(&rows))
}

/// `[(k, measure)]` for the boundary configuration at depths `1..=n`.
#[pyfunction]
fn sharpness_demo(n: u32) -> PyResult<Vec<(u32, String)>> {
    Ok(fractal::sharpness_demo(n)
        .map_err(err)?
        .into_iter()
        .map(|(k, m)| (k, rational::format(&m)))
        .collect())
}

/// Threshold of a preset chain name or a JSON chain description.
#[pyfunction]
fn dimension_threshold(chain: &str) -> PyResult<String> {
    let chain = if chain.trim_start().starts_with('{') {
        ThresholdChain::from_json(chain)
    } else {
        ThresholdChain::preset(chain)
    }
    .map_err(err)?;
    let res = threshold::dimension_threshold(&chain).map_err(err)?;
    Ok(rational::format(&res.threshold))
}

#[pymodule]
fn falconer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyQuadratic>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(monge_ampere, m)?)?;
    m.add_function(wrap_pyfunction!(image_set, m)?)?;
    m.add_function(wrap_pyfunction!(expander_census, m)?)?;
    m.add_function(wrap_pyfunction!(cover_check_distance, m)?)?;
    m.add_function(wrap_pyfunction!(cantor_cover, m)?)?;
    m.add_function(wrap_pyfunction!(image_measure, m)?)?;
    m.add_function(wrap_pyfunction!(near_zero_mass, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_demo, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_threshold, m)?)?;
    m.add("THRESHOLD_PRESETS", threshold::PRESETS.to_vec())?;
    Ok(())
}
