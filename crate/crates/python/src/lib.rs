//! Python bindings: algebras from the catalog or `.lie` text, cohomology,
//! invariants, versal deformations, witness search and the family symmetries.
//!
//! Coefficients go in as `int`, `str` or `fractions.Fraction` and come back
//! as `Fraction`.

use std::collections::BTreeMap;

use liecat_core::catalog::{self, AlgebraDef};
use liecat_core::cochain::Codifferential;
use liecat_core::cohomology::{betti, betti_rational, series_invariants, BettiMode, CohomologyReport, Evidence};
use liecat_core::deformation::{self, iso_witness_search, verify_parametric_iso, DeformationError, DEFAULT_BUDGET};
use liecat_core::extension::{symmetry_map, SymmetryMap};
use liecat_core::scalar::{parse_scalar, Matrix, Point, Polynomial, Scalar};
use liecat_core::tables;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(liecat, Inconclusive, PyException, "A randomized computation ran out of budget.");

const GENERIC_TRIALS: usize = 3;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_scalar(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    parse_scalar(&obj.str()?.to_string()).map_err(value_error)
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    to_scalar(obj)?.as_rational().ok_or_else(|| PyValueError::new_err(format!("`{obj}` is not a rational number")))
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn fractions<'py>(py: Python<'py>, v: &[BigRational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|q| fraction(py, q)).collect()
}

fn exact_vector(obj: &Bound<'_, PyAny>) -> PyResult<Vec<BigRational>> {
    obj.try_iter()?.map(|x| to_rational(&x?)).collect()
}

/// Square matrix from a sequence of rows; entries may involve parameters.
fn scalar_matrix(obj: &Bound<'_, PyAny>) -> PyResult<Matrix<Scalar>> {
    let rows = obj
        .try_iter()?
        .map(|row| row?.try_iter()?.map(|x| to_scalar(&x?)).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a nonempty square matrix"));
    }
    Ok(Matrix::from_rows(rows))
}

enum Structure {
    Exact(Codifferential<BigRational>),
    Symbolic(Codifferential<Scalar>, Vec<Polynomial>),
}

/// A Lie algebra structure, possibly depending on parameters, together with
/// the parameter values fixed so far.
#[pyclass(module = "liecat", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Algebra {
    def: AlgebraDef,
    point: Point,
}

impl Algebra {
    fn structure(&self) -> PyResult<Structure> {
        if self.def.params.iter().all(|p| self.point.contains_key(p)) {
            return Ok(Structure::Exact(self.def.at(&self.point).map_err(value_error)?));
        }
        if self.point.is_empty() {
            return Ok(Structure::Symbolic(self.def.structure.clone(), self.def.avoid.clone()));
        }
        let assign: BTreeMap<String, Scalar> =
            self.point.iter().map(|(k, v)| (k.clone(), Scalar::from_rational(v))).collect();
        let d = self.def.structure.substitute(&assign).map_err(value_error)?;
        Ok(Structure::Symbolic(d, Vec::new()))
    }

    fn exact(&self, what: &str) -> PyResult<Codifferential<BigRational>> {
        match self.structure()? {
            Structure::Exact(d) => Ok(d),
            Structure::Symbolic(..) => {
                Err(PyValueError::new_err(format!("{what} needs every parameter of {} fixed", self.def.id)))
            }
        }
    }

    fn scalar(&self) -> PyResult<Codifferential<Scalar>> {
        Ok(match self.structure()? {
            Structure::Exact(d) => d.to_scalar(),
            Structure::Symbolic(d, _) => d,
        })
    }
}

#[pymethods]
impl Algebra {
    /// Parses the `.lie` text format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let def = catalog::parse(text).map_err(value_error)?;
        Ok(Algebra { def, point: Point::new() })
    }

    /// Looks up `5.d5` style ids.
    #[staticmethod]
    fn catalog(id: &str) -> PyResult<Self> {
        let def = catalog::by_id(id).map_err(value_error)?.clone();
        Ok(Algebra { def, point: Point::new() })
    }

    /// Builds `sum c [e_i, e_j] = e_k` from 1-based `(i, j, k, c)` terms.
    #[staticmethod]
    fn from_psi(dim: usize, terms: &Bound<'_, PyAny>) -> PyResult<Self> {
        let mut params = std::collections::BTreeSet::new();
        let mut lines = Vec::new();
        for t in terms.try_iter()? {
            let (i, j, k, c): (usize, usize, usize, Bound<'_, PyAny>) = t?.extract()?;
            let c = to_scalar(&c)?;
            params.extend(c.params());
            lines.push(format!("psi {i} {j} -> {k} : {c}"));
        }
        let mut header = vec![format!("dim {dim}")];
        if !params.is_empty() {
            header.push(format!("params {}", params.into_iter().collect::<Vec<_>>().join(" ")));
        }
        header.extend(lines);
        Algebra::new(&header.join("\n"))
    }

    #[getter]
    fn id(&self) -> &str {
        &self.def.id
    }

    #[getter]
    fn dim(&self) -> usize {
        self.def.dim
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        self.def.params.clone()
    }

    /// Parameter values fixed so far.
    #[getter]
    fn point<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in &self.point {
            d.set_item(k, fraction(py, v)?)?;
        }
        Ok(d)
    }

    /// Names of the catalog's special points for this algebra.
    #[getter]
    fn special_points(&self) -> Vec<String> {
        self.def.special_points.iter().map(|s| s.name.clone()).collect()
    }

    /// Fixes parameters, either by keyword or positionally in `params` order.
    #[pyo3(signature = (*values, **named))]
    fn at(&self, values: Vec<Bound<'_, PyAny>>, named: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut point = self.point.clone();
        if !values.is_empty() {
            if values.len() != self.def.params.len() {
                return Err(PyValueError::new_err(format!(
                    "{} values for {} parameters",
                    values.len(),
                    self.def.params.len()
                )));
            }
            for (name, v) in self.def.params.iter().zip(&values) {
                point.insert(name.clone(), to_rational(v)?);
            }
        }
        if let Some(named) = named {
            for (k, v) in named.iter() {
                let name: String = k.extract()?;
                if !self.def.params.contains(&name) {
                    return Err(PyValueError::new_err(format!("unknown parameter `{name}`")));
                }
                point.insert(name, to_rational(&v)?);
            }
        }
        Ok(Algebra { def: self.def.clone(), point })
    }

    /// The catalog special point with the given name, e.g. `"(0:0)"`.
    fn special(&self, name: &str) -> PyResult<Self> {
        let sp = self.def.point(name).map_err(value_error)?;
        let def = self.def.restrict(sp).map_err(value_error)?;
        Ok(Algebra { def, point: self.point.clone() })
    }

    /// Whether `d ∘ d = 0`, identically in any free parameters.
    fn jacobi(&self) -> PyResult<bool> {
        Ok(match self.structure()? {
            Structure::Exact(d) => d.jacobi_check(),
            Structure::Symbolic(d, _) => d.jacobi_check(),
        })
    }

    fn bracket<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'py, PyAny>,
        y: &Bound<'py, PyAny>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let d = self.exact("bracket")?;
        let (x, y) = (exact_vector(x)?, exact_vector(y)?);
        if x.len() != d.dim() || y.len() != d.dim() {
            return Err(PyValueError::new_err(format!("vectors must have length {}", d.dim())));
        }
        fractions(py, &d.bracket(&x, &y))
    }

    /// Exact at a point, generic (probabilistic) or symbolic over the
    /// parameters.
    #[pyo3(signature = (seed = 0, symbolic = false))]
    fn cohomology(&self, py: Python<'_>, seed: u64, symbolic: bool) -> PyResult<Cohomology> {
        let structure = self.structure()?;
        let report = py
            .detach(move || match structure {
                Structure::Exact(d) => betti_rational(&d),
                Structure::Symbolic(d, avoid) => {
                    let mode = if symbolic {
                        BettiMode::Symbolic
                    } else {
                        BettiMode::Generic { seed, trials: GENERIC_TRIALS, avoid }
                    };
                    betti(&d, &mode)
                }
            })
            .map_err(value_error)?;
        Ok(Cohomology::from(report))
    }

    /// Center, derived and lower central series, solvability, nilpotency
    /// and Betti numbers.
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = self.exact("invariants")?;
        let v = py.detach(move || series_invariants(&d)).map_err(value_error)?;
        let out = PyDict::new(py);
        out.set_item("center", v.center_dim)?;
        out.set_item("derived", v.derived_series_dims)?;
        out.set_item("lower_central", v.lower_central_dims)?;
        out.set_item("solvable", v.is_solvable)?;
        out.set_item("nilpotent", v.is_nilpotent)?;
        out.set_item("betti", v.betti)?;
        Ok(out)
    }

    /// Versal deformation to the given order.
    #[pyo3(signature = (order = 3))]
    fn versal(&self, py: Python<'_>, order: u32) -> PyResult<Versal> {
        if order < 2 {
            return Err(PyValueError::new_err("order must be at least 2"));
        }
        let d = self.exact("versal")?;
        let r = py.detach(move || deformation::versal(&d, order)).map_err(value_error)?;
        Ok(Versal {
            parameters: r.num_parameters(),
            rigid: r.is_rigid(),
            relations_vanish: r.relations_vanish(),
            text: r.to_string(),
        })
    }

    /// The `.lie` text of the underlying definition.
    fn to_lie(&self) -> String {
        catalog::serialize(&self.def)
    }

    fn __str__(&self) -> PyResult<String> {
        Ok(match self.structure()? {
            Structure::Exact(d) => d.to_string(),
            Structure::Symbolic(d, _) => d.to_string(),
        })
    }

    fn __repr__(&self) -> String {
        let point: Vec<String> = self.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if point.is_empty() {
            format!("Algebra('{}')", self.def.id)
        } else {
            format!("Algebra('{}', {})", self.def.id, point.join(", "))
        }
    }
}

#[pyclass(module = "liecat", frozen, get_all)]
struct Cohomology {
    betti: Vec<usize>,
    /// `rank D_k` for `k = 0..n`.
    ranks: Vec<usize>,
    euler: i64,
    mode: &'static str,
    /// Seeds behind a probabilistic answer; empty otherwise.
    seeds: Vec<u64>,
}

impl From<CohomologyReport> for Cohomology {
    fn from(r: CohomologyReport) -> Self {
        let seeds = match &r.evidence {
            Evidence::Probabilistic { seeds, .. } => seeds.clone(),
            _ => Vec::new(),
        };
        Cohomology { euler: r.euler_characteristic(), mode: r.mode(), betti: r.betti, ranks: r.ranks, seeds }
    }
}

#[pymethods]
impl Cohomology {
    fn __repr__(&self) -> String {
        format!("Cohomology(betti={:?}, mode='{}')", self.betti, self.mode)
    }
}

#[pyclass(module = "liecat", frozen, get_all)]
struct Versal {
    parameters: usize,
    rigid: bool,
    relations_vanish: bool,
    text: String,
}

#[pymethods]
impl Versal {
    fn __str__(&self) -> String {
        self.text.clone()
    }
}

/// Catalog ids, optionally restricted to one table (`"3"`, `"4"`, `"5"`, `"nil"`).
#[pyfunction]
#[pyo3(signature = (table = None))]
fn catalog_ids(table: Option<&str>) -> PyResult<Vec<String>> {
    let defs: Vec<&AlgebraDef> = match table {
        None => catalog::all().iter().collect(),
        Some(t) => {
            let defs = catalog::list(t);
            if defs.is_empty() {
                return Err(PyValueError::new_err(format!("unknown table `{t}`")));
            }
            defs
        }
    };
    Ok(defs.iter().map(|d| d.id.clone()).collect())
}

/// Recomputes a table; one dict per row.
#[pyfunction]
#[pyo3(signature = (which, seed = 0))]
fn table<'py>(py: Python<'py>, which: String, seed: u64) -> PyResult<Bound<'py, PyList>> {
    let report = py.detach(move || tables::table(&which, seed)).map_err(|e| match e {
        tables::TableError::Inconclusive { .. } => Inconclusive::new_err(e.to_string()),
        e => value_error(e),
    })?;
    let rows = PyList::empty(py);
    for r in &report.rows {
        let d = PyDict::new(py);
        d.set_item("id", &r.id)?;
        d.set_item("point", &r.point)?;
        d.set_item("computed", &r.computed)?;
        d.set_item("expected", &r.expected)?;
        d.set_item("status", r.status.to_string())?;
        d.set_item("consistent", r.consistent())?;
        d.set_item("note", &r.note)?;
        rows.append(d)?;
    }
    Ok(rows)
}

/// Searches for `G` with `transform(a, G) = b`. Returns the rows of `G`,
/// `None` when an invariant proves the algebras non-isomorphic, and raises
/// `Inconclusive` when the budget runs out.
#[pyfunction]
#[pyo3(signature = (a, b, budget = DEFAULT_BUDGET, seed = 0))]
fn iso_search<'py>(
    py: Python<'py>,
    a: &Algebra,
    b: &Algebra,
    budget: usize,
    seed: u64,
) -> PyResult<Option<Vec<Vec<Bound<'py, PyAny>>>>> {
    let (d1, d2) = (a.exact("iso_search")?, b.exact("iso_search")?);
    match py.detach(move || iso_witness_search(&d1, &d2, budget, seed)) {
        Ok(g) => Ok(Some((0..g.rows()).map(|i| fractions(py, g.row(i))).collect::<PyResult<_>>()?)),
        Err(DeformationError::InvariantMismatch(_)) | Err(DeformationError::DimensionMismatch(..)) => Ok(None),
        Err(e @ DeformationError::BudgetExhausted(_)) => Err(Inconclusive::new_err(e.to_string())),
        Err(e) => Err(value_error(e)),
    }
}

/// Whether `transform(a, g) = b`, identically in any free parameters.
#[pyfunction]
fn verify_iso(a: &Algebra, b: &Algebra, g: &Bound<'_, PyAny>) -> PyResult<bool> {
    let g = scalar_matrix(g)?;
    match verify_parametric_iso(&a.scalar()?, &b.scalar()?, &g) {
        Ok(ok) => Ok(ok),
        Err(DeformationError::SingularMatrix) => Ok(false),
        Err(e) => Err(value_error(e)),
    }
}

/// Applies `sigma` or `tau` of the `5.d5` / `5.d6` family to a parameter point.
#[pyfunction]
fn symmetry<'py>(
    py: Python<'py>,
    family: &str,
    map: &str,
    point: &Bound<'py, PyAny>,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let map: SymmetryMap = map.parse().map_err(PyValueError::new_err)?;
    let family = if family.contains('.') { family.to_string() } else { format!("5.{family}") };
    let image = symmetry_map(&family, map, &exact_vector(point)?).map_err(value_error)?;
    fractions(py, &image)
}

#[pymodule]
fn liecat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Cohomology>()?;
    m.add_class::<Versal>()?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(iso_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_iso, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry, m)?)?;
    m.add("Inconclusive", m.py().get_type::<Inconclusive>())?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    Ok(())
}
