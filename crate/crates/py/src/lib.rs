//! Python bindings: exact field arithmetic, the two-chamber table, the
//! trajectory family and the evasion search.

use std::str::FromStr;
use std::sync::Arc;

use billiards_core::blocking::{self, random_blocking_set};
use billiards_core::family::{self, approximants, build_polygon};
use billiards_core::render::{render_table, render_trajectory, render_unfolded};
use billiards_core::unfolding::unfold;
use billiards_core::{wire, AlphaSpec, BlockingSet, Direction, Evasion, FamilyParams, Point, QElement, TraceStatus};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::basic::CompareOp;
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(blocking_billiards, CornerHitError, PyValueError, "A trajectory ran into a vertex.");

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts an int, a `fractions.Fraction` or a string such as `"3/2"`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let text = obj.str()?.to_string();
    BigRational::from_str(text.trim()).map_err(|_| value_error(format!("not a rational: {text:?}")))
}

/// `ℚ(α)` with `α² = u + vα`, `α` the larger root.
#[pyclass(frozen, skip_from_py_object, module = "blocking_billiards")]
#[derive(Clone)]
struct Field {
    spec: Arc<AlphaSpec>,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (u = None, v = None))]
    fn new(u: Option<&Bound<'_, PyAny>>, v: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let u = u.map(rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(2.into()));
        let v = v.map(rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(0.into()));
        let spec = AlphaSpec::new(u, v).map_err(value_error)?;
        Ok(Self { spec })
    }

    #[getter]
    fn u(&self) -> String {
        self.spec.u().to_string()
    }

    #[getter]
    fn v(&self) -> String {
        self.spec.v().to_string()
    }

    fn alpha(&self) -> Element {
        Element(QElement::alpha(&self.spec))
    }

    /// `r + s·α`.
    #[pyo3(signature = (r, s = None))]
    fn element(&self, r: &Bound<'_, PyAny>, s: Option<&Bound<'_, PyAny>>) -> PyResult<Element> {
        let r = rational(r)?;
        let s = s.map(rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(0.into()));
        Ok(Element(QElement::new(r, s, &self.spec)))
    }

    fn __eq__(&self, other: &Field) -> bool {
        self.spec == other.spec
    }

    fn __repr__(&self) -> String {
        format!("Field(u={}, v={})", self.spec.u(), self.spec.v())
    }
}

/// An exact element `r + s·α`.
#[pyclass(frozen, skip_from_py_object, module = "blocking_billiards")]
#[derive(Clone)]
struct Element(QElement);

impl Element {
    fn operand(&self, other: &Bound<'_, PyAny>) -> PyResult<QElement> {
        if let Ok(e) = other.extract::<PyRef<'_, Element>>() {
            return Ok(e.0.clone());
        }
        if let Ok(n) = other.extract::<BigInt>() {
            return Ok(QElement::from_int(n, self.0.spec()));
        }
        Err(PyTypeError::new_err("expected an Element or an int"))
    }

    fn divide(a: &QElement, b: &QElement) -> PyResult<Element> {
        if b.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero"));
        }
        a.try_div(b).map(Element).map_err(value_error)
    }
}

#[pymethods]
impl Element {
    #[getter]
    fn r(&self) -> String {
        self.0.r().to_string()
    }

    #[getter]
    fn s(&self) -> String {
        self.0.s().to_string()
    }

    #[getter]
    fn field(&self) -> Field {
        Field { spec: self.0.spec().clone() }
    }

    fn sign(&self) -> i8 {
        self.0.sign()
    }

    fn floor(&self) -> BigInt {
        self.0.floor()
    }

    fn ceil(&self) -> BigInt {
        self.0.ceil()
    }

    /// `r² + v·r·s − u·s²`, as a rational string.
    fn norm(&self) -> String {
        self.0.norm().to_string()
    }

    #[pyo3(signature = (digits = 12))]
    fn to_decimal(&self, digits: usize) -> String {
        self.0.to_decimal(digits)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.0.try_add(&self.operand(other)?).map(Element).map_err(value_error)
    }

    fn __radd__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.__add__(other)
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.0.try_sub(&self.operand(other)?).map(Element).map_err(value_error)
    }

    fn __rsub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.operand(other)?.try_sub(&self.0).map(Element).map_err(value_error)
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.0.try_mul(&self.operand(other)?).map(Element).map_err(value_error)
    }

    fn __rmul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        self.__mul__(other)
    }

    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Element::divide(&self.0, &self.operand(other)?)
    }

    fn __rtruediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        Element::divide(&self.operand(other)?, &self.0)
    }

    fn __neg__(&self) -> Element {
        Element(-&self.0)
    }

    fn __abs__(&self) -> Element {
        Element(self.0.abs())
    }

    fn __richcmp__(&self, other: &Bound<'_, PyAny>, op: CompareOp) -> PyResult<bool> {
        let other = self.operand(other)?;
        let ord = self
            .0
            .partial_cmp(&other)
            .ok_or_else(|| value_error("elements of different fields"))?;
        Ok(op.matches(ord))
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({} + {}*alpha)", self.0.r(), self.0.s())
    }
}

type PyPoint = (Element, Element);

fn to_py_point(p: &Point) -> PyPoint {
    (Element(p.x.clone()), Element(p.y.clone()))
}

fn from_py_point(p: &(PyRef<'_, Element>, PyRef<'_, Element>)) -> Point {
    Point::new(p.0 .0.clone(), p.1 .0.clone())
}

/// One approximant `(p, q)` with `λ = p − qα`.
#[pyclass(frozen, get_all, module = "blocking_billiards")]
struct FamilyIndex {
    n: usize,
    p: u64,
    q: u64,
    lam: Element,
}

impl FamilyIndex {
    fn wrap(idx: &billiards_core::FamilyIndex) -> Self {
        Self {
            n: idx.n,
            p: idx.p,
            q: idx.q,
            lam: Element(idx.lambda.clone()),
        }
    }
}

#[pymethods]
impl FamilyIndex {
    fn __repr__(&self) -> String {
        format!("FamilyIndex(n={}, p={}, q={})", self.n, self.p, self.q)
    }
}

/// A traced billiard path.
#[pyclass(frozen, module = "blocking_billiards")]
struct Trajectory(billiards_core::Trajectory);

#[pymethods]
impl Trajectory {
    #[getter]
    fn start(&self) -> PyPoint {
        to_py_point(&self.0.start)
    }

    #[getter]
    fn bounces(&self) -> Vec<PyPoint> {
        self.0.bounces.iter().map(|b| to_py_point(&b.point)).collect()
    }

    #[getter]
    fn terminal(&self) -> PyPoint {
        to_py_point(&self.0.terminal)
    }

    /// `"reached_target"` or `"budget_exhausted"`.
    #[getter]
    fn status(&self) -> &'static str {
        match self.0.status {
            TraceStatus::ReachedTarget => "reached_target",
            TraceStatus::BudgetExhausted => "budget_exhausted",
        }
    }

    fn passes_through(&self, point: (PyRef<'_, Element>, PyRef<'_, Element>)) -> bool {
        self.0.passes_through(&from_py_point(&point))
    }

    /// Vertices of the straight line obtained by reflecting the table
    /// across each wall in turn.
    fn unfold(&self) -> Vec<PyPoint> {
        unfold(&self.0).vertices(&self.0).iter().map(to_py_point).collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&wire::trajectory_to_wire(&self.0)).expect("serializes")
    }

    fn __len__(&self) -> usize {
        self.0.bounces.len()
    }

    fn __repr__(&self) -> String {
        format!("Trajectory(bounces={}, status={})", self.0.bounces.len(), self.status())
    }
}

/// One line of a family verification.
#[pyclass(frozen, get_all, module = "blocking_billiards")]
struct GammaReport {
    n: usize,
    p: u64,
    q: u64,
    lower_bounces: usize,
    upper_bounces: usize,
    crossing: PyPoint,
    ok: bool,
}

#[pymethods]
impl GammaReport {
    fn __repr__(&self) -> String {
        format!(
            "GammaReport(n={}, lower={}, upper={}, ok={})",
            self.n,
            self.lower_bounces,
            self.upper_bounces,
            if self.ok { "True" } else { "False" }
        )
    }
}

/// Outcome of an evasion search. `witness_n` is `None` when every
/// trajectory up to the budget was blocked.
#[pyclass(frozen, get_all, module = "blocking_billiards")]
struct Evaded {
    witness_n: Option<usize>,
    checked_up_to: Option<usize>,
    hit_tallies: Vec<usize>,
    trajectory: Option<Py<Trajectory>>,
}

#[pymethods]
impl Evaded {
    fn __bool__(&self) -> bool {
        self.witness_n.is_some()
    }

    fn __repr__(&self) -> String {
        match self.witness_n {
            Some(n) => format!("Evaded(witness_n={n})"),
            None => format!("Evaded(witness_n=None, checked_up_to={:?})", self.checked_up_to),
        }
    }
}

/// The table `P_α` with its marked points `O` and `A`.
#[pyclass(frozen, module = "blocking_billiards")]
struct Table {
    table: billiards_core::Table,
    params: FamilyParams,
}

impl Table {
    fn index(&self, n: usize) -> billiards_core::FamilyIndex {
        approximants(&self.params, n).pop().expect("n + 1 entries")
    }

    fn gamma_of(&self, n: usize) -> PyResult<billiards_core::Trajectory> {
        family::gamma(&self.table, &self.index(n)).map_err(value_error)
    }
}

#[pymethods]
impl Table {
    #[new]
    #[pyo3(signature = (field = None, l1 = None, l2 = None))]
    fn new(field: Option<&Field>, l1: Option<&Bound<'_, PyAny>>, l2: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let standard = FamilyParams::standard();
        let alpha = field.map_or(standard.alpha.clone(), |f| f.spec.clone());
        let l1 = l1.map(rational).transpose()?.unwrap_or(standard.l1);
        let l2 = l2.map(rational).transpose()?.unwrap_or(standard.l2);
        let params = FamilyParams::new(alpha, l1, l2).map_err(value_error)?;
        let table = build_polygon(&params).map_err(value_error)?;
        Ok(Self { table, params })
    }

    /// Reads the JSON written by `to_json` or `billiards build`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let w: wire::TableWire = serde_json::from_str(text).map_err(value_error)?;
        let table = wire::table_from_wire(&w).map_err(value_error)?;
        let params = FamilyParams {
            alpha: table.polygon().spec().clone(),
            ..FamilyParams::standard()
        };
        Ok(Self { table, params })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&wire::table_to_wire(&self.table)).expect("serializes")
    }

    #[getter]
    fn field(&self) -> Field {
        Field {
            spec: self.table.polygon().spec().clone(),
        }
    }

    #[getter]
    fn vertices(&self) -> Vec<PyPoint> {
        self.table.polygon().vertices().iter().map(to_py_point).collect()
    }

    #[getter]
    fn origin(&self) -> PyPoint {
        to_py_point(self.table.origin())
    }

    #[getter]
    fn target(&self) -> PyPoint {
        to_py_point(self.table.target())
    }

    /// `"inside"`, `"boundary"` or `"outside"`.
    fn contains(&self, point: (PyRef<'_, Element>, PyRef<'_, Element>)) -> String {
        format!("{:?}", self.table.contains(&from_py_point(&point))).to_lowercase()
    }

    fn approximants(&self, n_max: usize) -> Vec<FamilyIndex> {
        approximants(&self.params, n_max).iter().map(FamilyIndex::wrap).collect()
    }

    /// Traces from `start` along `direction`; raises `CornerHitError` at a
    /// vertex.
    #[pyo3(signature = (start, direction, max_bounces = 10_000))]
    fn trace(
        &self,
        start: (PyRef<'_, Element>, PyRef<'_, Element>),
        direction: (PyRef<'_, Element>, PyRef<'_, Element>),
        max_bounces: usize,
    ) -> PyResult<Trajectory> {
        let d = Direction::new(direction.0 .0.clone(), direction.1 .0.clone()).map_err(value_error)?;
        billiards_core::billiard::trace(&self.table, &from_py_point(&start), &d, max_bounces)
            .map(Trajectory)
            .map_err(|e| match e.corner() {
                Some(_) => CornerHitError::new_err(e.to_string()),
                None => value_error(e),
            })
    }

    /// The family trajectory `γₙ` from `O` to `A`.
    fn gamma(&self, n: usize) -> PyResult<Trajectory> {
        self.gamma_of(n).map(Trajectory)
    }

    fn verify(&self, n_max: usize) -> PyResult<Vec<GammaReport>> {
        let fam = approximants(&self.params, n_max);
        family::verify_family(&self.table, &fam)
            .into_iter()
            .map(|r| {
                let r = r.map_err(value_error)?;
                Ok(GammaReport {
                    n: r.index.n,
                    p: r.index.p,
                    q: r.index.q,
                    lower_bounces: r.lower_bounces,
                    upper_bounces: r.upper_bounces,
                    crossing: to_py_point(&r.crossing),
                    ok: r.ok,
                })
            })
            .collect()
    }

    /// First `γₙ` with `n ≤ n_max` that misses every point.
    #[pyo3(signature = (points, n_max = 200))]
    fn evade(&self, py: Python<'_>, points: Vec<(PyRef<'_, Element>, PyRef<'_, Element>)>, n_max: usize) -> PyResult<Evaded> {
        let pts = points.iter().map(from_py_point).collect();
        let set = BlockingSet::new(&self.table, pts).map_err(value_error)?;
        let fam = approximants(&self.params, n_max);
        Ok(match blocking::evade(&self.table, &fam, &set).map_err(value_error)? {
            Evasion::Witness(w) => Evaded {
                witness_n: Some(w.witness_n),
                checked_up_to: Some(w.checked_up_to),
                hit_tallies: Vec::new(),
                trajectory: Some(Py::new(py, Trajectory(w.trajectory))?),
            },
            Evasion::NotFound(nf) => Evaded {
                witness_n: None,
                checked_up_to: nf.checked_up_to,
                hit_tallies: nf.hit_tallies,
                trajectory: None,
            },
        })
    }

    /// Indices `n ≤ n_max` whose `γₙ` passes through `point`.
    fn hit_indices(&self, point: (PyRef<'_, Element>, PyRef<'_, Element>), n_max: usize) -> PyResult<Vec<usize>> {
        let fam = approximants(&self.params, n_max);
        let hits = blocking::hit_indices(&self.table, &fam, &from_py_point(&point), n_max).map_err(value_error)?;
        Ok(hits.into_iter().collect())
    }

    /// `(ε, k)` with `x = ε·y·(p + qα) + 2kα`, for a point of the lower
    /// chamber on `γₙ`; `None` when `γₙ` misses it.
    fn folding_witness(&self, n: usize, point: (PyRef<'_, Element>, PyRef<'_, Element>)) -> PyResult<Option<(i8, i64)>> {
        let w = blocking::folding_witnesses(&self.table, &self.index(n), &from_py_point(&point)).map_err(value_error)?;
        Ok(w.map(|w| (w.epsilon, w.k)))
    }

    #[pyo3(signature = (size, seed = 0))]
    fn random_blocking_set(&self, size: usize, seed: u64) -> Vec<PyPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_blocking_set(&self.table, size, &mut rng).points().iter().map(to_py_point).collect()
    }

    /// SVG of the table (`"table"`), of `γ_index` (`"gamma"`) or of its
    /// unfolding (`"unfolded"`).
    #[pyo3(signature = (what = "table", index = 0, digits = 12))]
    fn render(&self, what: &str, index: usize, digits: usize) -> PyResult<String> {
        match what {
            "table" => Ok(render_table(&self.table, digits)),
            "gamma" => Ok(render_trajectory(&self.table, &self.gamma_of(index)?, digits)),
            "unfolded" => {
                let traj = self.gamma_of(index)?;
                Ok(render_unfolded(&self.table, &traj, &unfold(&traj), digits))
            }
            other => Err(value_error(format!("unknown figure {other:?}"))),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Table(alpha^2 = {} + {}*alpha, l1={}, l2={})",
            self.params.alpha.u(),
            self.params.alpha.v(),
            self.params.l1,
            self.params.l2
        )
    }
}

#[pymodule]
fn blocking_billiards(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_class::<FamilyIndex>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<GammaReport>()?;
    m.add_class::<Evaded>()?;
    m.add_class::<Table>()?;
    m.add("CornerHitError", m.py().get_type::<CornerHitError>())?;
    Ok(())
}
