//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (any value whose `str` is `n` or `n/d` is accepted on input).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

use stable_image_core::algebra::rational::{format_rational, parse_rational};
use stable_image_core::fibers::{self, FiberConfig, FiberStatus, Membership};
use stable_image_core::imagedyn::{self, MapKind, StabilizationIndex, AUTO_PROBE_HEIGHT, DEFAULT_K_MAX};
use stable_image_core::parser::{parse_dyn_spec, parse_map, parse_poly, print_dyn_spec, print_map, SourceText};
use stable_image_core::setdyn::{CofiniteSelfMap, Node, Stability};
use stable_image_core::{MultiPoly, Point, Rational, Ring};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?.to_string();
    parse_rational(s.trim()).ok_or_else(|| value_error(format!("not a rational: {s}")))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn to_point(obj: &Bound<'_, PyAny>) -> PyResult<Point> {
    let (a, b): (Bound<'_, PyAny>, Bound<'_, PyAny>) = obj.extract()?;
    Ok(Point::new(to_rational(&a)?, to_rational(&b)?))
}

fn point_tuple<'py>(py: Python<'py>, p: &Point) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, [fraction(py, &p.x)?, fraction(py, &p.y)?])
}

fn point_list<'py>(py: Python<'py>, pts: &[Point]) -> PyResult<Bound<'py, PyList>> {
    let items = pts.iter().map(|p| point_tuple(py, p)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn config(seed: u64) -> FiberConfig {
    FiberConfig { seed, ..FiberConfig::default() }
}

/// Polynomial in `x, y` with rational coefficients.
#[pyclass(name = "Poly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly(MultiPoly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_poly(&SourceText::inline(text), &Ring::xy()).map(PyPoly).map_err(value_error)
    }

    fn evaluate<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>, y: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let v = self.0.evaluate(&[to_rational(x)?, to_rational(y)?]).map_err(value_error)?;
        fraction(py, &v)
    }

    fn total_degree(&self) -> u32 {
        self.0.total_degree()
    }

    fn __add__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 * &other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

/// Polynomial self-map of the plane, parsed from `f(x,y) = (p, q)`.
#[pyclass(name = "PolyMap", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolyMap(stable_image_core::PolyMap);

#[pymethods]
impl PyPolyMap {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_map(&SourceText::inline(text)).map(PyPolyMap).map_err(value_error)
    }

    #[getter]
    fn p(&self) -> PyPoly {
        PyPoly(self.0.p().clone())
    }

    #[getter]
    fn q(&self) -> PyPoly {
        PyPoly(self.0.q().clone())
    }

    fn apply<'py>(&self, py: Python<'py>, point: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyTuple>> {
        point_tuple(py, &self.0.apply(&to_point(point)?))
    }

    fn jacobian(&self) -> PyPoly {
        PyPoly(self.0.jacobian_det())
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &PyPolyMap) -> PyPolyMap {
        PyPolyMap(self.0.compose(&inner.0))
    }

    #[pyo3(signature = (k, degree_cap = 64))]
    fn iterate(&self, k: usize, degree_cap: u32) -> PyResult<PyPolyMap> {
        imagedyn::iterate_map(&self.0, k, degree_cap).map(PyPolyMap).map_err(value_error)
    }

    fn __str__(&self) -> String {
        print_map(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("PolyMap('{}')", print_map(&self.0))
    }
}

/// Self-map with finite coimage on core nodes plus shift rays.
#[pyclass(name = "DynSpec", frozen)]
struct PyDynSpec(CofiniteSelfMap);

fn node(s: &str) -> PyResult<Node> {
    s.parse().map_err(value_error)
}

fn node_strings(nodes: impl IntoIterator<Item = Node>) -> Vec<String> {
    nodes.into_iter().map(|n| n.to_string()).collect()
}

#[pymethods]
impl PyDynSpec {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_dyn_spec(&SourceText::inline(text)).map(PyDynSpec).map_err(value_error)
    }

    fn apply(&self, n: &str) -> PyResult<String> {
        self.0.apply(&node(n)?).map(|m| m.to_string()).map_err(value_error)
    }

    fn preimages(&self, n: &str) -> PyResult<Vec<String>> {
        self.0.preimages(&node(n)?).map(node_strings).map_err(value_error)
    }

    fn e_set(&self, k: u64) -> PyResult<Vec<String>> {
        self.0.e_set(k).map(node_strings).map_err(value_error)
    }

    /// `("stable", K, E^K)` or `("not stable", e)`.
    fn is_stable<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        match self.0.is_stable() {
            Stability::Stable { k, e_k } => ("stable", k, node_strings(e_k)).into_pyobject(py),
            Stability::NotStable { e } => ("not stable", e.to_string()).into_pyobject(py),
        }
    }

    /// `(e, M)` for an unstable spec.
    fn witness(&self) -> PyResult<(String, u64)> {
        let w = self.0.lemma1_witness().map_err(value_error)?;
        Ok((w.e.to_string(), w.m))
    }

    fn __str__(&self) -> String {
        print_dyn_spec(&self.0)
    }
}

/// Fiber over `point` as a dict: `status`, `distinct_count`, `certified`,
/// `rational_solutions`, `rational_complete`.
#[pyfunction]
#[pyo3(signature = (f, point, seed = 0))]
fn solve_fiber<'py>(py: Python<'py>, f: &PyPolyMap, point: &Bound<'py, PyAny>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = fibers::solve_fiber(&f.0, &to_point(point)?, &config(seed)).map_err(value_error)?;
    let d = PyDict::new(py);
    let status = match r.status {
        FiberStatus::Empty => "empty",
        FiberStatus::Finite => "finite",
        FiberStatus::Infinite => "infinite",
    };
    d.set_item("status", status)?;
    d.set_item("distinct_count", r.distinct_count)?;
    d.set_item("certified", r.certified)?;
    d.set_item("rational_solutions", point_list(py, &r.rational_solutions)?)?;
    d.set_item("rational_complete", r.rational_complete)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (f, point, seed = 0))]
fn in_image(f: &PyPolyMap, point: &Bound<'_, PyAny>, seed: u64) -> PyResult<bool> {
    fibers::in_image(&f.0, &to_point(point)?, &config(seed)).map_err(value_error)
}

/// `"yes"`, `"no"` or `"indeterminate"`.
#[pyfunction]
#[pyo3(signature = (f, point, n, seed = 0))]
fn a_membership(f: &PyPolyMap, point: &Bound<'_, PyAny>, n: usize, seed: u64) -> PyResult<&'static str> {
    let m = fibers::a_membership(&f.0, &to_point(point)?, n, &config(seed)).map_err(value_error)?;
    Ok(match m.member {
        Membership::Yes => "yes",
        Membership::No => "no",
        Membership::Indeterminate => "indeterminate",
    })
}

/// `(kind, jacobian)` with kind one of `JacobianPair`, `NonConstantJacobian`, `DegenerateJacobian`.
#[pyfunction]
fn classify(f: &PyPolyMap) -> (&'static str, PyPoly) {
    let c = imagedyn::classify(&f.0);
    let kind = match c.kind {
        MapKind::JacobianPair => "JacobianPair",
        MapKind::NonConstantJacobian => "NonConstantJacobian",
        MapKind::DegenerateJacobian => "DegenerateJacobian",
    };
    (kind, PyPoly(c.jacobian))
}

#[pyfunction]
#[pyo3(signature = (f, seed = 0))]
fn coimage_candidates<'py>(py: Python<'py>, f: &PyPolyMap, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let s = imagedyn::coimage_candidates(&f.0, &config(seed)).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("candidates", point_list(py, &s.candidates)?)?;
    d.set_item("coimage", point_list(py, &s.coimage)?)?;
    d.set_item("exhausted", s.exhausted)?;
    d.set_item("notes", s.notes)?;
    Ok(d)
}

/// Dict with `chain` (list of omitted point lists), `indeterminate`, `K`
/// (None when not reached) and `lines`.
#[pyfunction]
#[pyo3(signature = (f, candidates, k_max = DEFAULT_K_MAX, seed = 0))]
fn stabilization_report<'py>(
    py: Python<'py>,
    f: &PyPolyMap,
    candidates: Vec<Bound<'py, PyAny>>,
    k_max: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cands = candidates.iter().map(to_point).collect::<PyResult<Vec<_>>>()?;
    let r = imagedyn::stabilization_report(&f.0, &cands, k_max, &config(seed)).map_err(value_error)?;
    let d = PyDict::new(py);
    let chain = r.chain.iter().map(|l| point_list(py, &l.omitted)).collect::<PyResult<Vec<_>>>()?;
    let indet = r.chain.iter().map(|l| point_list(py, &l.indeterminate)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("chain", chain)?;
    d.set_item("indeterminate", indet)?;
    let k = match r.index {
        StabilizationIndex::Reached(k) => Some(k),
        StabilizationIndex::NotReachedWithin(_) => None,
    };
    d.set_item("K", k)?;
    d.set_item("lines", r.to_lines())?;
    Ok(d)
}

/// `(first, second, common_image)` or None when no probed fiber has two rational points.
#[pyfunction]
#[pyo3(signature = (f, targets = Vec::new(), auto_probe = false, seed = 0))]
fn injectivity_witness_search<'py>(
    py: Python<'py>,
    f: &PyPolyMap,
    targets: Vec<Bound<'py, PyAny>>,
    auto_probe: bool,
    seed: u64,
) -> PyResult<Option<Bound<'py, PyTuple>>> {
    let mut pts = targets.iter().map(to_point).collect::<PyResult<Vec<_>>>()?;
    if auto_probe {
        pts.extend(imagedyn::probe_grid(AUTO_PROBE_HEIGHT));
    }
    let s = imagedyn::injectivity_witness_search(&f.0, &pts, &config(seed)).map_err(value_error)?;
    s.witness
        .map(|w| PyTuple::new(py, [point_tuple(py, &w.first)?, point_tuple(py, &w.second)?, point_tuple(py, &w.common_image)?]))
        .transpose()
}

#[pymodule]
fn stable_image(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyPolyMap>()?;
    m.add_class::<PyDynSpec>()?;
    m.add_function(wrap_pyfunction!(solve_fiber, m)?)?;
    m.add_function(wrap_pyfunction!(in_image, m)?)?;
    m.add_function(wrap_pyfunction!(a_membership, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(coimage_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(stabilization_report, m)?)?;
    m.add_function(wrap_pyfunction!(injectivity_witness_search, m)?)?;
    Ok(())
}
