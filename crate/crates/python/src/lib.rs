//! Python bindings. Reports come back as plain dicts and lists, the same
//! documents the command-line tool prints with `--format json`.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyList, PyString};

use novikov::complex::EquivariantComplex;
use novikov::homology::{
    main_theorem_check, novikov_betti, polytope_betti, rational_approximation, rational_approximation_in_cover,
    stabilized_oracle, truncated_homology_oracle,
};
use novikov::lattice::{parse_rational, CohomologyClass, Polytope, Rational, Subpolytope};
use novikov::morse::{morse_reduce, MatchingStrategy};
use novikov::rank::RankOptions;
use novikov::twist::{tensor_base_change, twisted_complex};
use novikov::{corpus, demo, NovikovError};

create_exception!(pynovikov, NovikovException, PyException);

fn err(e: NovikovError) -> PyErr {
    NovikovException::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(err);
    }
    let n: i64 = obj.extract()?;
    Ok(Rational::from_integer(n.into()))
}

fn rationals(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    if let Ok(s) = obj.cast::<PyString>() {
        return novikov::lattice::parse_rational_list(&s.to_cow()?).map_err(err);
    }
    obj.try_iter()?.map(|item| rational(&item?)).collect()
}

/// A class is either "1,0" or a sequence of ints / "p/q" strings.
fn class(obj: &Bound<'_, PyAny>) -> PyResult<CohomologyClass> {
    Ok(CohomologyClass::new(rationals(obj)?))
}

/// A polytope is either "1,0;0,1" or a sequence of classes.
fn polytope(obj: &Bound<'_, PyAny>) -> PyResult<Polytope> {
    if let Ok(s) = obj.cast::<PyString>() {
        return Polytope::parse(&s.to_cow()?).map_err(err);
    }
    let vertices = obj.try_iter()?.map(|v| class(&v?)).collect::<PyResult<Vec<_>>>()?;
    Polytope::new(vertices).map_err(err)
}

fn subpolytope(p: &Polytope, restrict: Option<Vec<usize>>) -> PyResult<Subpolytope> {
    match restrict {
        None => Ok(Subpolytope::full(p)),
        Some(idx) => Subpolytope::new(p.clone(), idx).map_err(err),
    }
}

fn options(seed: u64) -> RankOptions {
    RankOptions { seed, ..RankOptions::default() }
}

/// Finite free chain complex over the group ring of the deck lattice.
#[pyclass(name = "Complex", module = "pynovikov", frozen)]
struct PyComplex {
    inner: EquivariantComplex,
}

#[pymethods]
impl PyComplex {
    /// Parses an explicit-matrix or group-presentation document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: EquivariantComplex::from_json_str(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyComplex { inner: EquivariantComplex::load(path).map_err(err)? })
    }

    /// One of the bundled examples, e.g. "torus" or "klein".
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        let (_, text) = corpus::documents()
            .into_iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| NovikovException::new_err(format!("no bundled complex named {name:?}")))?;
        Self::from_json(text)
    }

    #[staticmethod]
    fn corpus_names() -> Vec<&'static str> {
        corpus::documents().iter().map(|(n, _)| *n).collect()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn ring(&self) -> &'static str {
        self.inner.ring().tag()
    }

    #[getter]
    fn cells(&self) -> Vec<Vec<String>> {
        self.inner.cells().to_vec()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    /// Raises if the boundary does not square to zero.
    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[pyo3(signature = (class_, seed = 0))]
    fn novikov_betti<'py>(
        &self,
        py: Python<'py>,
        class_: &Bound<'py, PyAny>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = novikov_betti(&self.inner, &class(class_)?, &options(seed)).map_err(err)?;
        to_py(py, &r.to_json())
    }

    #[pyo3(signature = (vertices, restrict = None, seed = 0))]
    fn polytope_betti<'py>(
        &self,
        py: Python<'py>,
        vertices: &Bound<'py, PyAny>,
        restrict: Option<Vec<usize>>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = polytope(vertices)?;
        let b = subpolytope(&p, restrict)?;
        let r = polytope_betti(&self.inner, &p, &b, &options(seed)).map_err(err)?;
        to_py(py, &r.to_json())
    }

    /// Series elimination for a class with rank-1 period image. With an
    /// explicit `order` a single run is made, otherwise the order doubles
    /// until two runs agree.
    #[pyo3(signature = (class_, order = None))]
    fn oracle<'py>(
        &self,
        py: Python<'py>,
        class_: &Bound<'py, PyAny>,
        order: Option<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let a = class(class_)?;
        let doc = match order {
            Some(n) => serde_json::to_value(truncated_homology_oracle(&self.inner, &a, &rational(&n)?).map_err(err)?),
            None => serde_json::to_value(stabilized_oracle(&self.inner, &a, 1024).map_err(err)?),
        }
        .expect("oracle output serializes");
        to_py(py, &doc)
    }

    /// Twisted complex over `Nov(A|B)`; `check` also builds it by base
    /// change and raises if the two differ.
    #[pyo3(signature = (vertices, restrict = None, check = true))]
    fn twisted(&self, vertices: &Bound<'_, PyAny>, restrict: Option<Vec<usize>>, check: bool) -> PyResult<PyComplex> {
        let p = polytope(vertices)?;
        let b = subpolytope(&p, restrict)?;
        let t = twisted_complex(&self.inner, &p, &b).map_err(err)?;
        if check && tensor_base_change(&self.inner, &p, &b).map_err(err)? != t {
            return Err(NovikovException::new_err("twisted complex differs from the base change"));
        }
        Ok(PyComplex { inner: t.complex().clone() })
    }

    /// Morse-reduced complex on the critical cells.
    #[pyo3(signature = (seed = 0, strategy = "greedy"))]
    fn morse(&self, seed: u64, strategy: &str) -> PyResult<PyComplex> {
        let strategy = MatchingStrategy::parse(strategy).map_err(err)?;
        Ok(PyComplex { inner: morse_reduce(&self.inner, seed, strategy).map_err(err)?.complex })
    }

    #[pyo3(signature = (vertices, a, b, restrict = None, seeds = (1, 2)))]
    fn main_theorem_check<'py>(
        &self,
        py: Python<'py>,
        vertices: &Bound<'py, PyAny>,
        a: &Bound<'py, PyAny>,
        b: &Bound<'py, PyAny>,
        restrict: Option<Vec<usize>>,
        seeds: (u64, u64),
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = polytope(vertices)?;
        let sub = subpolytope(&p, restrict)?;
        let r =
            main_theorem_check(&self.inner, &p, &rationals(a)?, &rationals(b)?, &sub, seeds, &RankOptions::default())
                .map_err(err)?;
        to_py(py, &r.to_json())
    }

    fn __eq__(&self, other: &PyComplex) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let counts: Vec<String> = (0..self.inner.cells().len()).map(|k| self.inner.cell_count(k).to_string()).collect();
        format!("Complex(ring={}, rank={}, cells=[{}])", self.inner.ring(), self.inner.rank(), counts.join(", "))
    }
}

/// Classes near `class_` spanning the functionals of the cover
/// (by default the cover on which `class_` itself is exact).
#[pyfunction]
#[pyo3(signature = (class_, eps, cover = None))]
fn rational_approximation_family<'py>(
    py: Python<'py>,
    class_: &Bound<'py, PyAny>,
    eps: &Bound<'py, PyAny>,
    cover: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let u = class(class_)?;
    let eps = rational(eps)?;
    let f = match cover {
        None => rational_approximation(&u, &eps, u.rank()),
        Some(c) => rational_approximation_in_cover(&u, &eps, polytope(&c)?.vertices()),
    }
    .map_err(err)?;
    to_py(py, &f.to_json())
}

/// Runs every corpus check; returns one dict per criterion.
#[pyfunction]
fn run_demo<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
    let outcomes = demo::run_all();
    let items = outcomes
        .iter()
        .map(|o| to_py(py, &serde_json::to_value(o).expect("outcome serializes")))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

#[pymodule]
fn pynovikov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_function(wrap_pyfunction!(rational_approximation_family, m)?)?;
    m.add_function(wrap_pyfunction!(run_demo, m)?)?;
    m.add("NovikovError", m.py().get_type::<NovikovException>())?;
    Ok(())
}
