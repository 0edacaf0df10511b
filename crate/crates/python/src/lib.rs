//! Python bindings: packets, characters, Asai factors and series, the pole
//! probe, Kubota-Leopoldt zeta, Eisenstein families, family stubs and the
//! local zeta identities. Exact values cross the boundary as strings.

use asai_core::asai::{
    asai_euler_factor, distinguished_character, factorization_check, imprimitive_asai_coeffs, imprimitive_asai_embedded,
    pole_probe, BadPrimePolicy, EmbeddedSeq, PoleProbe, ProbeConfig, Verdict,
};
use asai_core::characters::{DirichletCharacter, QuadCharacter};
use asai_core::eigendata::{base_change, ingest_packet, EllipticEigenPacket, FamilyStub, HilbertEigenPacket, HilbertEntry, Packet};
use asai_core::eisfamily::{stabilization_check as core_stabilization, QExpFamily, Slot};
use asai_core::exactnum::Rational;
use asai_core::iwasawa::{kl_truncation, kubota_leopoldt, residue_at_trivial, IwasawaFraction, WeightChar};
use asai_core::localzeta::{
    ratio_depleted_vs_ordinary, verify_zeta1_spherical, verify_zeta2_limit, IdentityReport, LocalField, LocalParams,
};
use asai_core::padic_euler::{row_reports, trivial_zero_detect};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: asai_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

const DEFAULT_GRID: [f64; 4] = [0.4, 0.3, 0.2, 0.1];

#[pyclass(name = "DirichletCharacter", module = "asai_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCharacter {
    inner: DirichletCharacter,
}

#[pymethods]
impl PyCharacter {
    #[new]
    fn new(modulus: u64, exponents: Vec<u64>) -> PyResult<Self> {
        Ok(PyCharacter { inner: DirichletCharacter::new(modulus, exponents).map_err(err)? })
    }

    #[staticmethod]
    fn trivial(modulus: u64) -> Self {
        PyCharacter { inner: DirichletCharacter::trivial(modulus) }
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    /// Exact value in `Q(zeta_order)`, as coordinates text.
    fn eval(&self, a: i64) -> String {
        self.inner.eval(a).to_string()
    }

    fn eval_complex(&self, a: i64) -> (f64, f64) {
        let z = self.inner.eval_complex(a);
        (z.re, z.im)
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

fn chi_or_trivial(chi: Option<PyRef<'_, PyCharacter>>) -> DirichletCharacter {
    chi.map(|c| c.inner.clone()).unwrap_or_else(|| DirichletCharacter::trivial(1))
}

#[pyclass(name = "EllipticPacket", module = "asai_py", frozen)]
struct PyElliptic {
    inner: EllipticEigenPacket,
}

#[pymethods]
impl PyElliptic {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match ingest_packet(text).map_err(err)? {
            Packet::Elliptic(p) => Ok(PyElliptic { inner: p }),
            Packet::Hilbert(p) => Err(PyValueError::new_err(format!("{} is a Hilbert packet", p.label))),
        }
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn level(&self) -> u64 {
        self.inner.level
    }

    #[getter]
    fn weight(&self) -> u32 {
        self.inner.weight
    }

    #[getter]
    fn cutoff(&self) -> u64 {
        self.inner.cutoff
    }

    fn primes(&self) -> Vec<u64> {
        self.inner.primes().collect()
    }

    fn ap(&self, l: u64) -> PyResult<String> {
        Ok(self.inner.ap(l).map_err(err)?.to_string())
    }

    fn base_change(&self, disc: u64) -> PyResult<PyHilbert> {
        Ok(PyHilbert { inner: base_change(&self.inner, disc).map_err(err)? })
    }

    /// `eta_F omega^-1` for `F = Q(sqrt disc)`.
    fn distinguished_character(&self, disc: u64) -> PyResult<PyCharacter> {
        let eta = QuadCharacter::new(disc).map_err(err)?;
        Ok(PyCharacter { inner: distinguished_character(&self.inner, &eta) })
    }

    /// `(split type, matched)` at `l`; `matched` is `None` at skipped primes.
    #[pyo3(signature = (disc, l, chi=None))]
    fn factor_check(&self, disc: u64, l: u64, chi: Option<PyRef<'_, PyCharacter>>) -> PyResult<(String, Option<bool>)> {
        let bc = base_change(&self.inner, disc).map_err(err)?;
        let c = factorization_check(&self.inner, &bc, &chi_or_trivial(chi), l).map_err(err)?;
        Ok((c.split.to_string(), c.matched))
    }
}

fn probe_dict<'py>(py: Python<'py>, p: &PoleProbe) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("label", &p.label)?;
    d.set_item("cutoff", p.cutoff)?;
    d.set_item("mean_density", p.mean_density)?;
    d.set_item("residue_estimate", p.residue_estimate)?;
    let v = match p.verdict {
        Verdict::Pole => "pole",
        Verdict::Bounded => "bounded",
        Verdict::Inconclusive => "inconclusive",
    };
    d.set_item("verdict", v)?;
    d.set_item("fits", p.fits.iter().map(|f| (f.c, f.d)).collect::<Vec<_>>())?;
    Ok(d)
}

#[pyclass(name = "HilbertPacket", module = "asai_py", frozen)]
struct PyHilbert {
    inner: HilbertEigenPacket,
}

#[pymethods]
impl PyHilbert {
    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn disc(&self) -> u64 {
        self.inner.eta.disc
    }

    #[getter]
    fn cutoff(&self) -> u64 {
        self.inner.cutoff
    }

    /// `(split type, eigenvalues)` at the primes above `l`.
    fn entry(&self, l: u64) -> PyResult<(String, Vec<String>)> {
        let e = self.inner.entry(l).map_err(err)?;
        let vals = match e {
            HilbertEntry::Split(v) => v.iter().map(|x| x.to_string()).collect(),
            HilbertEntry::Inert(x) | HilbertEntry::Ramified(x) => vec![x.to_string()],
            HilbertEntry::Unsupported => vec![],
        };
        Ok((e.split_type_name().to_string(), vals))
    }

    /// Coefficients of the Asai Euler factor in `X = l^-s`.
    #[pyo3(signature = (l, chi=None))]
    fn euler_factor(&self, l: u64, chi: Option<PyRef<'_, PyCharacter>>) -> PyResult<Vec<String>> {
        Ok(asai_euler_factor(&self.inner, &chi_or_trivial(chi), l).map_err(err)?.coeff_strings())
    }

    /// `b_1 .. b_cutoff` of the imprimitive Asai L-series.
    #[pyo3(signature = (cutoff, chi=None))]
    fn asai_coefficients(&self, cutoff: usize, chi: Option<PyRef<'_, PyCharacter>>) -> PyResult<Vec<String>> {
        let s = imprimitive_asai_coeffs(&self.inner, &chi_or_trivial(chi), cutoff, BadPrimePolicy::Error).map_err(err)?;
        Ok(s.coeffs().iter().map(|c| c.to_string()).collect())
    }

    #[pyo3(signature = (cutoff, chi=None, grid=None, embedding=0))]
    fn pole_probe<'py>(
        &self,
        py: Python<'py>,
        cutoff: usize,
        chi: Option<PyRef<'_, PyCharacter>>,
        grid: Option<Vec<f64>>,
        embedding: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let seq = imprimitive_asai_embedded(&self.inner, &chi_or_trivial(chi), cutoff, BadPrimePolicy::Error, embedding).map_err(err)?;
        let grid = grid.unwrap_or_else(|| DEFAULT_GRID.to_vec());
        probe_dict(py, &pole_probe(&seq, &grid, &ProbeConfig::default()).map_err(err)?)
    }
}

/// Pole probe on the Riemann zeta function.
#[pyfunction]
#[pyo3(signature = (cutoff, grid=None))]
fn pole_probe_zeta<'py>(py: Python<'py>, cutoff: usize, grid: Option<Vec<f64>>) -> PyResult<Bound<'py, PyDict>> {
    let grid = grid.unwrap_or_else(|| DEFAULT_GRID.to_vec());
    probe_dict(py, &pole_probe(&EmbeddedSeq::ones(cutoff), &grid, &ProbeConfig::default()).map_err(err)?)
}

#[pyclass(name = "KubotaLeopoldt", module = "asai_py", frozen)]
struct PyKL {
    inner: IwasawaFraction,
    prec: i64,
}

#[pymethods]
impl PyKL {
    #[new]
    #[pyo3(signature = (p, branch=0, prec=10))]
    fn new(p: u64, branch: u64, prec: i64) -> PyResult<Self> {
        let work = prec + 2;
        let inner = kubota_leopoldt(p, branch, work, kl_truncation(p, work)).map_err(err)?;
        Ok(PyKL { inner, prec })
    }

    #[getter]
    fn pole_order(&self) -> usize {
        self.inner.pole_order()
    }

    /// Value at `kappa = x^k` modulo `p^prec`.
    fn eval(&self, k: i64) -> PyResult<String> {
        Ok(self.inner.eval_at_weight(&WeightChar::Int(k)).map_err(err)?.reduce(self.prec).to_string())
    }

    /// Value as the rational representative of the p-adic digits.
    fn eval_lift(&self, k: i64) -> PyResult<String> {
        Ok(self.inner.eval_at_weight(&WeightChar::Int(k)).map_err(err)?.reduce(self.prec).lift().to_string())
    }

    fn residue(&self) -> PyResult<String> {
        Ok(residue_at_trivial(&self.inner).map_err(err)?.reduce(self.prec).to_string())
    }

    fn residue_lift(&self) -> PyResult<String> {
        Ok(residue_at_trivial(&self.inner).map_err(err)?.reduce(self.prec).lift().to_string())
    }
}

#[pyclass(name = "EisensteinFamily", module = "asai_py", frozen)]
struct PyFamily {
    inner: QExpFamily,
}

#[pymethods]
impl PyFamily {
    #[staticmethod]
    fn katz(level: u64, p: u64, trunc: usize) -> PyResult<Self> {
        Ok(PyFamily { inner: QExpFamily::katz(level, p, trunc).map_err(err)? })
    }

    #[staticmethod]
    fn flat(level: u64, p: u64, trunc: usize) -> PyResult<Self> {
        Ok(PyFamily { inner: QExpFamily::flat(level, p, trunc).map_err(err)? })
    }

    #[staticmethod]
    fn sharp(level: u64, p: u64, trunc: usize) -> PyResult<Self> {
        Ok(PyFamily { inner: QExpFamily::sharp(level, p, trunc).map_err(err)? })
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    /// Symbolic coefficients `a_0 .. a_trunc`.
    fn coefficients(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn deplete(&self) -> Self {
        PyFamily { inner: self.inner.deplete() }
    }

    /// `E(kappa-1, 0)` if `first`, else `E(0, kappa-1)`.
    fn kappa_slice(&self, first: bool) -> PyResult<Self> {
        let (a, b) = if first { (Slot::Kappa(-1), Slot::Int(0)) } else { (Slot::Int(0), Slot::Kappa(-1)) };
        Ok(PyFamily { inner: self.inner.slice(a, b).map_err(err)? })
    }

    /// Coefficients `n >= 1` at integer weights.
    fn eval_int(&self, k1: i64, k2: i64) -> Vec<String> {
        self.inner.eval_int(k1, k2).iter().map(|c| c.to_string()).collect()
    }

    fn same_coefficients(&self, other: PyRef<'_, PyFamily>) -> bool {
        self.inner.coeffs() == other.inner.coeffs()
    }
}

/// `(passed, mismatching indices)` for the p-stabilized Eisenstein series.
#[pyfunction]
#[pyo3(signature = (k, level, p, trunc=100, prec=10))]
fn stabilization_check(k: u32, level: u64, p: u64, trunc: usize, prec: i64) -> PyResult<(bool, Vec<usize>)> {
    let r = core_stabilization(k, level, p, trunc, prec).map_err(err)?;
    Ok((r.passed(), r.mismatches))
}

#[pyclass(name = "FamilyStub", module = "asai_py", frozen)]
struct PyStub {
    inner: FamilyStub,
}

#[pymethods]
impl PyStub {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyStub { inner: FamilyStub::from_json(text).map_err(err)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p
    }

    #[pyo3(signature = (prec=10))]
    fn trivial_zero<'py>(&self, py: Python<'py>, prec: i64) -> PyResult<Bound<'py, PyDict>> {
        let t = trivial_zero_detect(&self.inner, prec).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("structural_zero", t.structural_zero)?;
        d.set_item("valuation", t.valuation)?;
        d.set_item("precision", t.precision)?;
        d.set_item("depleted", t.depleted)?;
        d.set_item("forced_vanishing", t.forced_vanishing)?;
        Ok(d)
    }

    /// `(m, flat, depleted, euler factor, product matches)` per row.
    #[pyo3(signature = (prec=10))]
    fn rows(&self, prec: i64) -> PyResult<Vec<(u32, String, String, String, bool)>> {
        Ok(row_reports(&self.inner, prec)
            .map_err(err)?
            .into_iter()
            .map(|r| (r.m, r.flat_part, r.depleted_part, r.euler_ep, r.product_matches))
            .collect())
    }
}

fn field(q: Option<u64>) -> PyResult<LocalField> {
    match q {
        Some(q) => LocalField::concrete(q).map_err(err),
        None => Ok(LocalField::symbolic()),
    }
}

/// Symbolic parameters, or `[m1, n1, a2, b2]` as rational strings.
fn params(v: Option<Vec<String>>) -> PyResult<LocalParams> {
    let Some(v) = v else {
        return Ok(LocalParams::symbolic());
    };
    let rs = v
        .iter()
        .map(|s| s.trim().parse::<Rational>().map_err(|e| PyValueError::new_err(format!("{s:?}: {e}"))))
        .collect::<PyResult<Vec<_>>>()?;
    let arr: [Rational; 4] = rs.try_into().map_err(|_| PyValueError::new_err("expected four parameters [m1, n1, a2, b2]"))?;
    LocalParams::from_rationals(arr).map_err(err)
}

fn identity_dict<'py>(py: Python<'py>, r: IdentityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("identity", r.identity)?;
    d.set_item("q", r.q)?;
    d.set_item("inputs", r.inputs)?;
    d.set_item("lhs", r.lhs)?;
    d.set_item("rhs", r.rhs)?;
    d.set_item("checks", r.checks)?;
    d.set_item("verdict", r.verdict)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (q=None, params=None))]
fn verify_zeta1<'py>(py: Python<'py>, q: Option<u64>, params: Option<Vec<String>>) -> PyResult<Bound<'py, PyDict>> {
    let p = self::params(params)?;
    identity_dict(py, verify_zeta1_spherical(&p, &field(q)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (r, q=None, params=None, mu1_sign=1, omega2_sign=1))]
fn verify_zeta2<'py>(
    py: Python<'py>,
    r: u32,
    q: Option<u64>,
    params: Option<Vec<String>>,
    mu1_sign: i8,
    omega2_sign: i8,
) -> PyResult<Bound<'py, PyDict>> {
    let p = self::params(params)?.with_signs(mu1_sign, omega2_sign);
    identity_dict(py, verify_zeta2_limit(r, &p, &field(q)?).map_err(err)?)
}

/// `(ratio as text, report)` for the depleted versus ordinary zeta integrals.
#[pyfunction]
#[pyo3(signature = (q=None, params=None))]
fn depleted_ordinary_ratio<'py>(py: Python<'py>, q: Option<u64>, params: Option<Vec<String>>) -> PyResult<(String, Bound<'py, PyDict>)> {
    let p = self::params(params)?;
    let (ratio, rep) = ratio_depleted_vs_ordinary(&p, &field(q)?).map_err(err)?;
    Ok((ratio.fmt_with(&asai_core::localzeta::var_names()), identity_dict(py, rep)?))
}

#[pymodule]
fn asai_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCharacter>()?;
    m.add_class::<PyElliptic>()?;
    m.add_class::<PyHilbert>()?;
    m.add_class::<PyKL>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyStub>()?;
    m.add_function(wrap_pyfunction!(pole_probe_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(stabilization_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_zeta1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_zeta2, m)?)?;
    m.add_function(wrap_pyfunction!(depleted_ordinary_ratio, m)?)?;
    Ok(())
}
