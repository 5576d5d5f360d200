//! Python bindings: Farey enumeration, empirical gap statistics, the
//! analytic limit laws, coprimality-run analysis, and the triangle map.

use num::ToPrimitive;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use farey::analytic::PiecewiseCurve;
use farey::bcz::{CylinderWord, TrianglePoint};
use farey::empirical::EmpiricalCDF;
use farey::fraction::FareyFilter;
use farey::geometry::Rat;
use farey::runs::ContinuantKind;
use farey::FareyError;

fn err(e: FareyError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn filter(ell: Option<i64>, d: Option<i64>) -> PyResult<FareyFilter> {
    match (ell, d) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("ell and d are mutually exclusive")),
        (Some(l), None) => FareyFilter::numerator_not_divisible(l).map_err(err),
        (None, Some(d)) => FareyFilter::denominator_coprime(d).map_err(err),
        (None, None) => Ok(FareyFilter::All),
    }
}

fn rational(xi: (i64, i64)) -> PyResult<Rat> {
    if xi.1 <= 0 {
        return Err(PyValueError::new_err("denominator must be positive"));
    }
    Ok(Rat::new(xi.0.into(), xi.1.into()))
}

fn rat_pair(r: &Rat) -> PyResult<(i64, i64)> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(PyValueError::new_err("rational exceeds i64")),
    }
}

fn word(letters: Vec<i64>) -> PyResult<CylinderWord> {
    CylinderWord::new(letters).map_err(err)
}

/// The Farey fractions of order q under the optional numerator (ell)
/// or denominator-coprimality (d) filter, as (numerator, denominator)
/// pairs in increasing order.
#[pyfunction]
#[pyo3(signature = (q, ell=None, d=None))]
fn enumerate(q: i64, ell: Option<i64>, d: Option<i64>) -> PyResult<Vec<(i64, i64)>> {
    Ok(farey::fraction::enumerate(q, filter(ell, d)?)
        .map_err(err)?
        .map(|f| (f.numerator(), f.denominator()))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (q, ell=None, d=None))]
fn count(q: i64, ell: Option<i64>, d: Option<i64>) -> PyResult<u64> {
    farey::fraction::count(q, filter(ell, d)?).map_err(err)
}

/// Exact count of consecutive pairs with gap <= xi / q^2; xi is an
/// exact rational given as (numerator, denominator).
#[pyfunction]
#[pyo3(signature = (q, xi, ell=None, d=None))]
fn threshold_count(q: i64, xi: (i64, i64), ell: Option<i64>, d: Option<i64>) -> PyResult<u64> {
    farey::empirical::threshold_count(q, filter(ell, d)?, &rational(xi)?).map_err(err)
}

/// Count of consecutive pairs with determinant k in the d-coprime set.
#[pyfunction]
fn pair_count(q: i64, d: i64, k: i64) -> PyResult<u64> {
    Ok(farey::empirical::pair_count_k(q, d, k).map_err(err)?.count)
}

/// The two-case split of the threshold count: (no-skip hits, one-skip
/// hits, largest observed skip).
#[pyfunction]
fn case_counts(q: i64, ell: i64, xi: (i64, i64)) -> PyResult<(u64, u64, usize)> {
    let cc = farey::empirical::case_counts(q, ell, &rational(xi)?).map_err(err)?;
    Ok((cc.n1, cc.n2, cc.max_skip))
}

/// Empirical CDF of normalized consecutive gaps.
#[pyclass]
struct GapCdf {
    inner: EmpiricalCDF,
}

#[pymethods]
impl GapCdf {
    /// Builds the CDF from the order-q sequence under the optional
    /// filter; bins forces memory-bounded binned storage.
    #[staticmethod]
    #[pyo3(signature = (q, ell=None, d=None, bins=None))]
    fn compute(q: i64, ell: Option<i64>, d: Option<i64>, bins: Option<usize>) -> PyResult<Self> {
        let mut inner = farey::empirical::gap_cdf(q, filter(ell, d)?).map_err(err)?;
        if let Some(b) = bins {
            inner = inner.into_binned(b).map_err(err)?;
        }
        Ok(Self { inner })
    }

    /// Number of gaps.
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Unnormalized span of the underlying point set.
    fn span(&self) -> f64 {
        self.inner.span()
    }

    /// Right-continuous CDF value at s.
    fn eval(&self, s: f64) -> f64 {
        self.inner.eval(s)
    }

    /// Left limit at s.
    fn eval_left(&self, s: f64) -> f64 {
        self.inner.eval_left(s)
    }

    fn sample_points(&self) -> Vec<f64> {
        self.inner.sample_points()
    }
}

/// Evaluable analytic curve with its breakpoint list.
#[pyclass]
struct Curve {
    inner: PiecewiseCurve,
    name: String,
}

#[pymethods]
impl Curve {
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.name)
    }
}

/// The unconstrained gap-area function A(xi).
#[pyfunction]
fn curve_a() -> Curve {
    Curve {
        inner: farey::analytic::curve_a(),
        name: "A".into(),
    }
}

/// The single-cylinder area function A_K(xi).
#[pyfunction]
fn curve_a_k(k: i64) -> PyResult<Curve> {
    Ok(Curve {
        inner: farey::analytic::curve_a_k(k).map_err(err)?,
        name: format!("A_{k}"),
    })
}

/// Limiting gap CDF of the numerator-filtered set.
#[pyfunction]
fn curve_ftilde(ell: i64) -> PyResult<Curve> {
    Ok(Curve {
        inner: farey::analytic::curve_ftilde(ell).map_err(err)?,
        name: format!("Ftilde_{ell}"),
    })
}

/// Limiting gap CDF of the denominator-coprime set.
#[pyfunction]
fn curve_fd(d: i64) -> PyResult<Curve> {
    Ok(Curve {
        inner: farey::words::curve_fd(d).map_err(err)?,
        name: format!("F_{d}"),
    })
}

/// Sup distance between an empirical CDF and an analytic curve,
/// evaluated at both one-sided limits of every jump.
#[pyfunction]
fn ks_distance(cdf: &GapCdf, curve: &Curve) -> f64 {
    farey::empirical::ks_distance(&cdf.inner, &curve.inner)
}

#[pyfunction]
fn zeta2() -> f64 {
    farey::analytic::zeta2()
}

#[pyfunction]
fn constant_c(n: i64) -> PyResult<f64> {
    farey::analytic::constant_c(n).map_err(err)
}

#[pyfunction]
fn k_tilde(ell: i64) -> PyResult<f64> {
    farey::analytic::k_tilde(ell).map_err(err)
}

#[pyfunction]
fn k_d(d: i64) -> PyResult<f64> {
    farey::analytic::k_d(d).map_err(err)
}

#[pyfunction]
fn big_a(xi: f64) -> f64 {
    farey::analytic::big_a(xi)
}

#[pyfunction]
fn a_k(k: i64, xi: f64) -> PyResult<f64> {
    farey::analytic::a_k(k, xi).map_err(err)
}

#[pyfunction]
fn g_ell(ell: i64, xi: f64) -> PyResult<f64> {
    farey::analytic::g_ell(ell, xi).map_err(err)
}

#[pyfunction]
fn ftilde_cdf(ell: i64, s: f64) -> PyResult<f64> {
    farey::analytic::ftilde_cdf(ell, s).map_err(err)
}

/// kappa(x, y) = floor((1 + x)/y) on the Farey triangle, with exact
/// rational coordinates given as (numerator, denominator).
#[pyfunction]
fn kappa(x: (i64, i64), y: (i64, i64)) -> PyResult<i64> {
    let p = TrianglePoint::from_i64(x, y).map_err(err)?;
    Ok(farey::bcz::kappa(&p))
}

/// One step of the triangle map, exactly: returns ((xn, xd), (yn, yd)).
#[pyfunction]
fn apply_t(x: (i64, i64), y: (i64, i64)) -> PyResult<((i64, i64), (i64, i64))> {
    let p = TrianglePoint::from_i64(x, y).map_err(err)?;
    let q = farey::bcz::apply_t(&p);
    Ok((rat_pair(&q.x)?, rat_pair(&q.y)?))
}

/// Vertices of the region of points whose itinerary starts with the
/// given word, as floats.
#[pyfunction]
fn word_polygon(letters: Vec<i64>) -> PyResult<Vec<(f64, f64)>> {
    let poly = farey::bcz::word_polygon(&word(letters)?).map_err(err)?;
    Ok(poly.vertices().iter().map(|p| p.to_f64()).collect())
}

/// Area of the word region cut by the gap inequality at exact level
/// k / xi.
#[pyfunction]
fn omega_area(letters: Vec<i64>, k: i64, xi: f64) -> PyResult<f64> {
    farey::bcz::omega_area(&word(letters)?, k, xi).map_err(err)
}

/// All words of length ell - 1 with Farey continuant k and nonempty
/// region.
#[pyfunction]
fn enumerate_words(k: i64, ell: i64) -> PyResult<Vec<Vec<i64>>> {
    Ok(farey::words::enumerate_words(k, ell)
        .map_err(err)?
        .into_iter()
        .map(|w| w.letters().to_vec())
        .collect())
}

/// Residue pairs (r0, r1) mod d compatible with the word.
#[pyfunction]
fn residue_set(d: i64, letters: Vec<i64>) -> PyResult<Vec<(i64, i64)>> {
    farey::words::residue_set(d, &word(letters)?).map_err(err)
}

/// Regular ("regular") or Farey ("farey") continuant of xs.
#[pyfunction]
fn continuant(kind: &str, xs: Vec<i64>) -> PyResult<i64> {
    let kind = match kind {
        "regular" => ContinuantKind::Regular,
        "farey" => ContinuantKind::Farey,
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be 'regular' or 'farey', got '{other}'"
            )))
        }
    };
    Ok(farey::runs::continuant(kind, &xs))
}

/// Exhaustive continuant-identity sweep; returns (positions checked,
/// violations).
#[pyfunction]
fn verify_identity_32(q: i64, ellmax: usize) -> PyResult<(usize, usize)> {
    let rep = farey::runs::verify_identity_32(q, ellmax).map_err(err)?;
    Ok((rep.checked, rep.violations.len()))
}

/// Longest run of consecutive denominators sharing a factor with d in
/// the order-q sequence: (start_index, denominators).
#[pyfunction]
fn max_run(d: i64, q: i64) -> PyResult<(usize, Vec<i64>)> {
    let r = farey::runs::max_run(d, q).map_err(err)?;
    Ok((r.start_index, r.denominators))
}

/// Run certificate over all Q <= qmax as a dict-like tuple:
/// (empirical_max, attaining_Q, proven_bound, bound_source).
#[pyfunction]
fn certify_l(d: i64, qmax: i64) -> PyResult<(usize, i64, i64, String)> {
    let c = farey::runs::certify_l(d, qmax).map_err(err)?;
    Ok((
        c.empirical_max,
        c.attaining_q,
        c.proven_bound,
        c.bound_source.label().to_string(),
    ))
}

#[pymodule]
fn fareygaps(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GapCdf>()?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_count, m)?)?;
    m.add_function(wrap_pyfunction!(pair_count, m)?)?;
    m.add_function(wrap_pyfunction!(case_counts, m)?)?;
    m.add_function(wrap_pyfunction!(curve_a, m)?)?;
    m.add_function(wrap_pyfunction!(curve_a_k, m)?)?;
    m.add_function(wrap_pyfunction!(curve_ftilde, m)?)?;
    m.add_function(wrap_pyfunction!(curve_fd, m)?)?;
    m.add_function(wrap_pyfunction!(ks_distance, m)?)?;
    m.add_function(wrap_pyfunction!(zeta2, m)?)?;
    m.add_function(wrap_pyfunction!(constant_c, m)?)?;
    m.add_function(wrap_pyfunction!(k_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(k_d, m)?)?;
    m.add_function(wrap_pyfunction!(big_a, m)?)?;
    m.add_function(wrap_pyfunction!(a_k, m)?)?;
    m.add_function(wrap_pyfunction!(g_ell, m)?)?;
    m.add_function(wrap_pyfunction!(ftilde_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(apply_t, m)?)?;
    m.add_function(wrap_pyfunction!(word_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(omega_area, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_words, m)?)?;
    m.add_function(wrap_pyfunction!(residue_set, m)?)?;
    m.add_function(wrap_pyfunction!(continuant, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity_32, m)?)?;
    m.add_function(wrap_pyfunction!(max_run, m)?)?;
    m.add_function(wrap_pyfunction!(certify_l, m)?)?;
    Ok(())
}
