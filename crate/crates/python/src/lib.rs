use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use d0res_core::analysis::{self, AnalyzeOptions, OutputFormat};
use d0res_core::branches::{self, BranchParam, Germ};
use d0res_core::exactalg::{Poly, Scalar};
use d0res_core::modlab::{self, FiniteModule};
use d0res_core::verify::{self, EmbeddingCertificate, Subject};
use d0res_core::Error;

create_exception!(d0res, D0resError, PyException);
create_exception!(d0res, UnsupportedFieldExtension, D0resError);
create_exception!(d0res, RaiseTruncation, D0resError);
create_exception!(d0res, RankBelowCritical, D0resError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::UnsupportedFieldExtension(_) | Error::NestedExtension(_) => UnsupportedFieldExtension::new_err(msg),
        Error::RaiseTruncation(_) => RaiseTruncation::new_err(msg),
        Error::RankBelowCritical { .. } => RankBelowCritical::new_err(msg),
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::NotOnCurve
        | Error::NotReduced(_)
        | Error::DegenerateBranch(_)
        | Error::DimensionMismatch(_) => PyValueError::new_err(msg),
        _ => D0resError::new_err(msg),
    }
}

fn scalars(items: &[String]) -> PyResult<Vec<Scalar>> {
    items.iter().map(|s| Scalar::parse(s, None).map_err(to_py)).collect()
}

fn terms(items: Vec<(usize, String)>) -> PyResult<Vec<(usize, Scalar)>> {
    items.into_iter().map(|(e, c)| Ok((e, Scalar::parse(&c, None).map_err(to_py)?))).collect()
}

fn plane_poly(items: Vec<((u32, u32), String)>) -> PyResult<Poly> {
    let t = items
        .into_iter()
        .map(|((i, j), c)| Ok((vec![i, j], Scalar::parse(&c, None).map_err(to_py)?)))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Poly::from_terms(2, t))
}

/// A branch t -> (x_1(t), ..., x_m(t)) through the origin.
#[pyclass(name = "Branch", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBranch {
    inner: BranchParam,
}

#[pymethods]
impl PyBranch {
    /// One list of (exponent, "coefficient") pairs per coordinate.
    #[new]
    #[pyo3(signature = (coords, precision = 32))]
    fn new(coords: Vec<Vec<(usize, String)>>, precision: usize) -> PyResult<Self> {
        let t = coords.into_iter().map(terms).collect::<PyResult<Vec<_>>>()?;
        Ok(PyBranch { inner: branches::branch_from_terms(&t, precision).map_err(to_py)? })
    }

    #[getter]
    fn multiplicity(&self) -> u32 {
        self.inner.multiplicity()
    }

    #[getter]
    fn precision(&self) -> usize {
        self.inner.precision()
    }

    fn coords(&self) -> Vec<String> {
        self.inner.coords().iter().map(|s| s.to_string()).collect()
    }

    fn fiber(&self, rank: usize) -> PyResult<PyModuleRep> {
        Ok(PyModuleRep { inner: modlab::fiber_module(&self.inner, rank).map_err(to_py)? })
    }

    fn graph_jet_class_vanishes(&self) -> bool {
        verify::graph_jet_class_vanishes(&self.inner)
    }

    fn pushforward_restriction_oracle(&self, rank: usize) -> PyResult<bool> {
        verify::pushforward_restriction_oracle(&self.inner, rank).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Branch{}", self.inner)
    }
}

/// A finite-dimensional module given by commuting nilpotent action matrices.
#[pyclass(name = "FiniteModule", frozen)]
struct PyModuleRep {
    inner: FiniteModule,
}

#[pymethods]
impl PyModuleRep {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Action matrices as rows of exact scalar strings.
    fn actions(&self) -> Vec<Vec<Vec<String>>> {
        self.inner
            .actions()
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect())
            .collect()
    }

    fn annihilator(&self, degree_bound: u32) -> Vec<String> {
        modlab::annihilator(&self.inner, degree_bound).basis.iter().map(|p| p.to_string()).collect()
    }

    fn support_length(&self) -> PyResult<usize> {
        modlab::support_length(&self.inner).map_err(to_py)
    }
}

/// Verdicts of one rank, flattened to plain Python values.
#[pyclass(name = "Certificate", frozen, get_all)]
struct PyCertificate {
    rank: u64,
    r0: u64,
    exploratory: bool,
    passed: bool,
    support_preserved: bool,
    /// (kind, branch indices, outcome label)
    verdicts: Vec<(String, Vec<usize>, String)>,
}

impl From<&EmbeddingCertificate> for PyCertificate {
    fn from(c: &EmbeddingCertificate) -> Self {
        let verdicts = c
            .points
            .iter()
            .chain(&c.tangents)
            .map(|v| {
                let subject = match v.subject {
                    Subject::Branch(i) => vec![i],
                    Subject::Pair(i, j) => vec![i, j],
                };
                (format!("{:?}", v.kind).to_lowercase(), subject, v.outcome.label().to_string())
            })
            .collect();
        PyCertificate {
            rank: c.rank,
            r0: c.r0,
            exploratory: c.exploratory,
            passed: c.pass,
            support_preserved: c.support_preserved,
            verdicts,
        }
    }
}

/// A singular point with its branches and invariants.
#[pyclass(name = "Germ", frozen)]
struct PyGerm {
    inner: Germ,
}

#[pymethods]
impl PyGerm {
    /// Germ of the plane curve sum c*x^i*y^j = 0 at `point` (the origin by default).
    #[staticmethod]
    #[pyo3(signature = (poly, point = None, precision = 32))]
    fn from_implicit(poly: Vec<((u32, u32), String)>, point: Option<Vec<String>>, precision: usize) -> PyResult<Self> {
        let f = plane_poly(poly)?;
        let p = scalars(&point.unwrap_or_else(|| vec!["0".into(), "0".into()]))?;
        let bs = branches::newton_puiseux(&f, &p, precision).map_err(to_py)?;
        Ok(PyGerm { inner: branches::germ_invariants(bs, p).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_branches(branches: Vec<PyRef<'_, PyBranch>>) -> PyResult<Self> {
        let bs: Vec<BranchParam> = branches.iter().map(|b| b.inner.clone()).collect();
        let m = bs.first().map_or(2, |b| b.ambient_dim());
        Ok(PyGerm { inner: branches::germ_invariants(bs, vec![Scalar::from_int(0); m]).map_err(to_py)? })
    }

    #[getter]
    fn branches(&self) -> Vec<PyBranch> {
        self.inner.branches.iter().map(|b| PyBranch { inner: b.clone() }).collect()
    }

    #[getter]
    fn n(&self) -> Vec<u32> {
        self.inner.n.clone()
    }

    #[getter]
    fn l_matrix(&self) -> Vec<Vec<Option<u64>>> {
        self.inner.l_matrix.clone()
    }

    #[getter]
    fn bii(&self) -> Option<u64> {
        self.inner.bii
    }

    #[getter]
    fn l0(&self) -> u64 {
        self.inner.l0
    }

    #[getter]
    fn r0(&self) -> u64 {
        self.inner.r0
    }

    fn is_singular(&self) -> bool {
        self.inner.is_singular()
    }

    fn certify(&self, rank: u64) -> PyResult<PyCertificate> {
        Ok(PyCertificate::from(&verify::certify(&self.inner, rank).map_err(to_py)?))
    }

    fn certify_exploratory(&self, rank: u64) -> PyResult<PyCertificate> {
        Ok(PyCertificate::from(&verify::certify_exploratory(&self.inner, rank).map_err(to_py)?))
    }

    fn __repr__(&self) -> String {
        format!("Germ(n={:?}, bii={:?}, l0={}, r0={})", self.inner.n, self.inner.bii, self.inner.l0, self.inner.r0)
    }
}

/// Run the full pipeline on a JSON request; returns the report as JSON or text.
#[pyfunction]
#[pyo3(signature = (request, format = "json"))]
fn analyze(request: &str, format: &str) -> PyResult<String> {
    let req = analysis::parse_request(request).map_err(to_py)?;
    let format = match format {
        "json" => OutputFormat::Json,
        "text" => OutputFormat::Text,
        other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    };
    let opts = AnalyzeOptions::from_env().map_err(to_py)?;
    let rep = analysis::run_analyze(&req, &opts).map_err(to_py)?;
    Ok(analysis::emit_report(&rep, format))
}

#[pyfunction]
fn intersection_length(a: PyRef<'_, PyBranch>, b: PyRef<'_, PyBranch>) -> PyResult<u64> {
    branches::intersection_length(&a.inner, &b.inner).map_err(to_py)
}

#[pymodule]
fn d0res(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("D0resError", m.py().get_type::<D0resError>())?;
    m.add("UnsupportedFieldExtension", m.py().get_type::<UnsupportedFieldExtension>())?;
    m.add("RaiseTruncation", m.py().get_type::<RaiseTruncation>())?;
    m.add("RankBelowCritical", m.py().get_type::<RankBelowCritical>())?;
    m.add("__version__", analysis::VERSION)?;
    m.add_class::<PyBranch>()?;
    m.add_class::<PyModuleRep>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyGerm>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_length, m)?)?;
    Ok(())
}
