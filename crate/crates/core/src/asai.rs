//! Asai and symmetric-square Euler factors, the base-change factorization,
//! imprimitive Asai Dirichlet series, numerical evaluation and a pole probe.

use crate::characters::{DirichletCharacter, QuadCharacter, SplitType};
use crate::eigendata::{unitary_normalize, EllipticEigenPacket, HilbertEigenPacket, HilbertEntry};
use crate::exactnum::{factorize, gcd_u64, rat_int, NumberField, NumberFieldElem, Poly, Rational, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorTag {
    Asai,
    Sym2,
    Dirichlet,
    BadOmitted,
}

/// Local factor `P(X)` with `X = l^{-s}`, arithmetic normalization.
#[derive(Clone, Debug)]
pub struct EulerFactor {
    pub l: u64,
    pub poly: Poly<NumberFieldElem>,
    pub tag: FactorTag,
}

impl EulerFactor {
    pub fn is_bad(&self) -> bool {
        self.tag == FactorTag::BadOmitted
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.poly.coeffs().iter().map(|c| c.to_string()).collect()
    }

    /// `P(X / l^w)`, e.g. the unitary factor with `w = k - 1`.
    pub fn shifted(&self, w: u32) -> Poly<NumberFieldElem> {
        let f = self.poly.coeffs()[0].field().clone();
        let c = NumberFieldElem::from_rational(&f, Rational::new(BigInt::one(), BigInt::from(self.l).pow(w)));
        self.poly.rescale_var(&c)
    }
}

/// `(1 - a^2 c X)(1 - a b c X)(1 - b^2 c X)` in terms of `a = alpha + beta`,
/// `b = alpha beta`.
pub fn sym2_poly<R: Ring>(a: &R, b: &R, c: &R) -> Poly<R> {
    let e1 = a.clone() * a.clone() - b.clone();
    let e2 = b.clone() * e1.clone();
    let e3 = b.clone() * b.clone() * b.clone();
    let c2 = c.clone() * c.clone();
    Poly::new(vec![a.one_like(), -(c.clone() * e1), c2.clone() * e2, -(c2 * c.clone() * e3)])
}

/// `prod_{i,j} (1 - x_i y_j c X)` from the traces `s_i` and determinants
/// `p_i` of the two Satake pairs.
pub fn asai_split_poly<R: Ring>(s1: &R, s2: &R, p1: &R, p2: &R, c: &R) -> Poly<R> {
    let two = s1.one_like() + s1.one_like();
    let e1 = s1.clone() * s2.clone();
    let e2 = s1.clone() * s1.clone() * p2.clone() + s2.clone() * s2.clone() * p1.clone() - two * p1.clone() * p2.clone();
    let e3 = p1.clone() * p2.clone() * s1.clone() * s2.clone();
    let e4 = p1.clone() * p1.clone() * p2.clone() * p2.clone();
    let c2 = c.clone() * c.clone();
    let c3 = c2.clone() * c.clone();
    let c4 = c2.clone() * c2.clone();
    Poly::new(vec![s1.one_like(), -(c.clone() * e1), c2 * e2, -(c3 * e3), c4 * e4])
}

/// `(1 - alpha c X)(1 - beta c X)(1 - alpha beta c^2 X^2)` from
/// `a = alpha + beta`, `d = alpha beta`.
pub fn asai_inert_poly<R: Ring>(a: &R, d: &R, c: &R) -> Poly<R> {
    let one = a.one_like();
    let c2 = c.clone() * c.clone();
    let q1 = Poly::new(vec![one.clone(), -(c.clone() * a.clone()), c2.clone() * d.clone()]);
    let q2 = Poly::new(vec![one.clone(), one.zero_like(), -(c2 * d.clone())]);
    q1 * q2
}

fn in_field(x: NumberFieldElem, field: &Arc<NumberField>) -> Result<NumberFieldElem> {
    if x.field().degree() == 1 && field.degree() > 1 {
        x.coerce_into(field)
    } else {
        Ok(x)
    }
}

/// Common field of two values: one of them must be rational or both agree.
fn common_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> Result<Arc<NumberField>> {
    if a.same_as(b) || b.degree() == 1 {
        Ok(a.clone())
    } else if a.degree() == 1 {
        Ok(b.clone())
    } else {
        Err(Error::FieldMismatch(format!(
            "compositum of {:?} and {:?} is not supported",
            a.min_poly(),
            b.min_poly()
        )))
    }
}

fn pow_int(l: u64, e: u32) -> Rational {
    rat_int(BigInt::from(l).pow(e))
}

pub fn sym2_euler_factor(pi: &EllipticEigenPacket, chi: &DirichletCharacter, l: u64) -> Result<EulerFactor> {
    let field = common_field(&pi.field, chi.value_field())?;
    if pi.is_bad(l) {
        return Ok(EulerFactor { l, poly: Poly::constant(NumberFieldElem::one(&field)), tag: FactorTag::BadOmitted });
    }
    let a = in_field(pi.ap(l)?.clone(), &field)?;
    let b = in_field(pi.central_term(l)?, &field)?;
    let c = in_field(chi.eval(l as i64), &field)?;
    Ok(EulerFactor { l, poly: sym2_poly(&a, &b, &c), tag: FactorTag::Sym2 })
}

/// `1 - chi(l) eta(l) omega(l) l^{k-1} X`.
pub fn dirichlet_factor(pi: &EllipticEigenPacket, eta: &QuadCharacter, chi: &DirichletCharacter, l: u64) -> Result<EulerFactor> {
    let field = common_field(&pi.field, chi.value_field())?;
    let c = in_field(chi.eval(l as i64), &field)?;
    let t = in_field(pi.central_term(l)?, &field)?.scale(&rat_int(eta.eval(l)));
    Ok(EulerFactor { l, poly: Poly::one_minus(c * t), tag: FactorTag::Dirichlet })
}

pub fn asai_euler_factor(pk: &HilbertEigenPacket, chi: &DirichletCharacter, l: u64) -> Result<EulerFactor> {
    let field = common_field(&pk.field, chi.value_field())?;
    let k = pk.parallel_weight()?;
    let c = in_field(chi.eval(l as i64), &field)?;
    let bad = || EulerFactor { l, poly: Poly::constant(NumberFieldElem::one(&field)), tag: FactorTag::BadOmitted };
    let poly = match pk.entry(l)? {
        HilbertEntry::Split([a1, a2]) => {
            let w = in_field(pk.omega_of_norm(l)?, &field)?.scale(&pow_int(l, k - 1));
            let s1 = in_field(a1.clone(), &field)?;
            let s2 = in_field(a2.clone(), &field)?;
            asai_split_poly(&s1, &s2, &w, &w, &c)
        }
        HilbertEntry::Inert(a) => {
            let d = in_field(pk.omega_of_norm(l * l)?, &field)?.scale(&pow_int(l, 2 * (k - 1)));
            asai_inert_poly(&in_field(a.clone(), &field)?, &d, &c)
        }
        HilbertEntry::Ramified(_) | HilbertEntry::Unsupported => return Ok(bad()),
    };
    Ok(EulerFactor { l, poly, tag: FactorTag::Asai })
}

/// One row of the factorization table.
#[derive(Clone, Debug)]
pub struct FactorCheck {
    pub l: u64,
    pub split: &'static str,
    pub asai: EulerFactor,
    pub sym2: EulerFactor,
    pub dirichlet: EulerFactor,
    /// `None` when the prime is skipped (ramified or bad).
    pub matched: Option<bool>,
}

/// Compares `Asai(BC(pi) x chi)` with `Sym^2(pi) x chi` times the Dirichlet
/// factor at `l`.
pub fn factorization_check(pi: &EllipticEigenPacket, bc: &HilbertEigenPacket, chi: &DirichletCharacter, l: u64) -> Result<FactorCheck> {
    let asai = asai_euler_factor(bc, chi, l)?;
    let sym2 = sym2_euler_factor(pi, chi, l)?;
    let dirichlet = dirichlet_factor(pi, &bc.eta, chi, l)?;
    let split = match bc.eta.split_type(l) {
        SplitType::Split => "split",
        SplitType::Inert => "inert",
        SplitType::Ramified => "ramified",
    };
    let matched = if asai.is_bad() || sym2.is_bad() {
        None
    } else {
        Some(asai.poly == sym2.poly.clone() * dirichlet.poly.clone())
    };
    Ok(FactorCheck { l, split, asai, sym2, dirichlet, matched })
}

/// `chi = eta_F omega^{-1}`.
pub fn distinguished_character(pi: &EllipticEigenPacket, eta: &QuadCharacter) -> DirichletCharacter {
    eta.as_dirichlet().mul(&pi.character.inverse())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    EulerProduct,
    ImprimitiveDefinition,
}

/// What to do with primes whose eigenvalues are flagged unsupported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadPrimePolicy {
    #[default]
    Error,
    /// Drop the whole Euler factor at such primes.
    Omit,
}

/// Exact Dirichlet coefficients `b_1 .. b_cutoff`.
#[derive(Clone, Debug)]
pub struct DirichletCoeffSeq {
    pub cutoff: usize,
    pub provenance: Provenance,
    pub field: Arc<NumberField>,
    coeffs: Vec<NumberFieldElem>,
}

impl DirichletCoeffSeq {
    pub fn b(&self, n: usize) -> &NumberFieldElem {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[NumberFieldElem] {
        &self.coeffs
    }

    pub fn embed(&self, index: usize, label: impl Into<String>) -> EmbeddedSeq {
        EmbeddedSeq { label: label.into(), coeffs: self.coeffs.iter().map(|c| c.embed(index)).collect() }
    }
}

/// Dirichlet coefficients after a complex embedding.
#[derive(Clone, Debug)]
pub struct EmbeddedSeq {
    pub label: String,
    /// `coeffs[n - 1] = b_n`
    pub coeffs: Vec<Complex64>,
}

impl EmbeddedSeq {
    pub fn ones(cutoff: usize) -> Self {
        EmbeddedSeq { label: "zeta".into(), coeffs: vec![Complex64::new(1.0, 0.0); cutoff] }
    }

    pub fn from_character(chi: &DirichletCharacter, cutoff: usize) -> Self {
        EmbeddedSeq { label: format!("L({chi})"), coeffs: (1..=cutoff).map(|n| chi.eval_complex(n as i64)).collect() }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

/// Assembles a multiplicative sequence from prime-power values.
fn assemble<T: Clone>(cutoff: usize, one: T, mul: impl Fn(&T, &T) -> T, mut pp: impl FnMut(u64, u32) -> Result<T>) -> Result<Vec<T>> {
    let spf = smallest_prime_factors(cutoff);
    let mut out: Vec<T> = Vec::with_capacity(cutoff);
    out.push(one);
    for n in 2..=cutoff {
        let l = spf[n] as usize;
        let mut m = n;
        let mut e = 0;
        while m % l == 0 {
            m /= l;
            e += 1;
        }
        let v = pp(l as u64, e)?;
        out.push(mul(&out[m - 1], &v));
    }
    Ok(out)
}

struct AsaiData {
    field: Arc<NumberField>,
    k: u32,
    modulus: u64,
    prefactor_modulus: u64,
    psi: DirichletCharacter,
}

fn asai_data(pk: &HilbertEigenPacket, chi: &DirichletCharacter) -> Result<AsaiData> {
    let psi = chi.pow(2).mul(&pk.central_restricted());
    let field = common_field(&common_field(&pk.field, chi.value_field())?, psi.value_field())?;
    Ok(AsaiData {
        field,
        k: pk.parallel_weight()?,
        modulus: chi.modulus(),
        prefactor_modulus: chi.modulus() * pk.level_norm,
        psi,
    })
}

/// `a°_{l^e O} chi(l^e)`, or zero where the series omits it.
fn asai_prime_power(
    pk: &HilbertEigenPacket,
    chi: &DirichletCharacter,
    d: &AsaiData,
    policy: BadPrimePolicy,
    l: u64,
    e: u32,
) -> Result<NumberFieldElem> {
    if d.modulus % l == 0 {
        return Ok(NumberFieldElem::zero(&d.field));
    }
    if matches!(pk.entry(l)?, HilbertEntry::Unsupported) {
        return match policy {
            BadPrimePolicy::Error => Err(Error::UnsupportedBadPrime(l)),
            BadPrimePolicy::Omit => Ok(NumberFieldElem::zero(&d.field)),
        };
    }
    let n = l.pow(e);
    let a = in_field(unitary_normalize(&pk.rational_prime_power_coefficient(l, e)?, n, d.k), &d.field)?;
    let c = in_field(chi.eval(n as i64), &d.field)?;
    Ok(a * c)
}

/// Coefficients of `L_{N_chi Nm(N)}(chi^2 omega|_Q, 2s) * sum a°_{nO} chi(n) n^{-s}`.
pub fn imprimitive_asai_coeffs(
    pk: &HilbertEigenPacket,
    chi: &DirichletCharacter,
    cutoff: usize,
    policy: BadPrimePolicy,
) -> Result<DirichletCoeffSeq> {
    let d = asai_data(pk, chi)?;
    let one = NumberFieldElem::one(&d.field);
    let c = assemble(cutoff, one, |a, b| a.clone() * b.clone(), |l, e| asai_prime_power(pk, chi, &d, policy, l, e))?;
    let mut b = c.clone();
    let mut m = 2usize;
    while m * m <= cutoff {
        if gcd_u64(m as u64, d.prefactor_modulus) == 1 {
            let w = in_field(d.psi.eval(m as i64), &d.field)?;
            let sq = m * m;
            for j in 1..=cutoff / sq {
                if !c[j - 1].is_zero() {
                    b[j * sq - 1] = b[j * sq - 1].clone() + w.clone() * c[j - 1].clone();
                }
            }
        }
        m += 1;
    }
    Ok(DirichletCoeffSeq { cutoff, provenance: Provenance::ImprimitiveDefinition, field: d.field, coeffs: b })
}

/// Floating-point version of [`imprimitive_asai_coeffs`] under a complex
/// embedding; prime-power values are computed exactly before embedding.
pub fn imprimitive_asai_embedded(
    pk: &HilbertEigenPacket,
    chi: &DirichletCharacter,
    cutoff: usize,
    policy: BadPrimePolicy,
    embedding: usize,
) -> Result<EmbeddedSeq> {
    let d = asai_data(pk, chi)?;
    let one = Complex64::new(1.0, 0.0);
    let c = assemble(cutoff, one, |a, b| a * b, |l, e| Ok(asai_prime_power(pk, chi, &d, policy, l, e)?.embed(embedding)))?;
    let mut b = c.clone();
    let mut m = 2usize;
    while m * m <= cutoff {
        if gcd_u64(m as u64, d.prefactor_modulus) == 1 {
            let w = d.psi.eval_complex(m as i64);
            let sq = m * m;
            for j in 1..=cutoff / sq {
                b[j * sq - 1] += w * c[j - 1];
            }
        }
        m += 1;
    }
    Ok(EmbeddedSeq { label: format!("Asai({}, {chi})", pk.label), coeffs: b })
}

/// Coefficients of `prod_l 1/P_l(l^{-s})` over the supplied factors; indices
/// divisible by an absent prime get zero.
pub fn euler_product_coeffs(factors: &[(u64, Poly<NumberFieldElem>)], cutoff: usize, field: &Arc<NumberField>) -> Result<DirichletCoeffSeq> {
    let mut local: HashMap<u64, Vec<NumberFieldElem>> = HashMap::new();
    for (l, p) in factors {
        let mut emax = 0u32;
        while (*l as u128).pow(emax + 1) <= cutoff as u128 {
            emax += 1;
        }
        let pc: Vec<NumberFieldElem> = p.coeffs().iter().map(|c| in_field(c.clone(), field)).collect::<Result<_>>()?;
        if !pc[0].clone().try_sub(&NumberFieldElem::one(field))?.is_zero() {
            return Err(Error::Precondition(format!("Euler factor at {l} has constant term {}", pc[0])));
        }
        let mut inv = vec![NumberFieldElem::one(field)];
        for j in 1..=emax as usize {
            let mut s = NumberFieldElem::zero(field);
            for i in 1..=j.min(pc.len() - 1) {
                s = s + pc[i].clone() * inv[j - i].clone();
            }
            inv.push(-s);
        }
        local.insert(*l, inv);
    }
    let zero = NumberFieldElem::zero(field);
    let coeffs = assemble(cutoff, NumberFieldElem::one(field), |a, b| a.clone() * b.clone(), |l, e| {
        Ok(local.get(&l).map(|v| v[e as usize].clone()).unwrap_or_else(|| zero.clone()))
    })?;
    Ok(DirichletCoeffSeq { cutoff, provenance: Provenance::EulerProduct, field: field.clone(), coeffs })
}

/// Unitary Asai Euler factors `P(X / l^{k-1})` at every good prime up to
/// `cutoff`; their product expands to the imprimitive series at indices
/// supported on good primes.
pub fn asai_unitary_factors(pk: &HilbertEigenPacket, chi: &DirichletCharacter, cutoff: u64) -> Result<Vec<(u64, Poly<NumberFieldElem>)>> {
    let d = asai_data(pk, chi)?;
    let mut out = vec![];
    for l in crate::exactnum::primes_up_to(cutoff) {
        let f = asai_euler_factor(pk, chi, l)?;
        if f.is_bad() {
            continue;
        }
        let unit = f.shifted(d.k - 1).try_map(|c| in_field(c.clone(), &d.field))?;
        out.push((l, unit));
    }
    Ok(out)
}

/// Good primes of a Hilbert packet for the twist by `chi`.
pub fn good_primes(pk: &HilbertEigenPacket, chi: &DirichletCharacter) -> Vec<u64> {
    pk.entries()
        .filter(|(l, e)| matches!(e, HilbertEntry::Split(_) | HilbertEntry::Inert(_)) && chi.modulus() % **l != 0 && pk.level_norm % **l != 0)
        .map(|(l, _)| *l)
        .collect()
}

/// Indices whose prime factors all lie in `primes`.
pub fn supported_on(n: u64, primes: &[u64]) -> bool {
    factorize(n).iter().all(|(l, _)| primes.binary_search(l).is_ok())
}

/// A complex value with an error radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LValue {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub tail_bound: f64,
}

impl LValue {
    pub fn contains(&self, x: f64) -> bool {
        ((self.re - x).powi(2) + self.im.powi(2)).sqrt() <= self.radius
    }
}

/// Partial sum to the cutoff plus a tail bound from the envelope
/// `|b_n| <= C n^theta`, with `C` fitted on the computed coefficients.
pub fn lseries_eval(seq: &EmbeddedSeq, s: f64, theta: f64, tol: f64) -> Result<LValue> {
    if s <= 1.0 + theta {
        return Err(Error::Precondition(format!("need s > 1 + theta, got s = {s}, theta = {theta}")));
    }
    let x = seq.cutoff() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut c_env: f64 = 0.0;
    for (i, b) in seq.coeffs.iter().enumerate() {
        let n = (i + 1) as f64;
        let t = b * n.powf(-s);
        sum += t;
        abs_sum += t.norm();
        c_env = c_env.max(b.norm() / n.powf(theta));
    }
    let tail = c_env * x.powf(theta + 1.0 - s) / (s - 1.0 - theta);
    if tail > tol {
        return Err(Error::InsufficientCutoff { tail, tol });
    }
    let rounding = abs_sum * f64::EPSILON * (seq.cutoff() as f64).log2().max(1.0) * 4.0;
    Ok(LValue { re: sum.re, im: sum.im, radius: tail + rounding, tail_bound: tail })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pole,
    Bounded,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeConfig {
    /// Number of halvings of the grid after the base fit.
    pub refinements: u32,
    /// Fitted `c` below this counts as no pole.
    pub noise_floor: f64,
    /// Maximum relative spread of `c` across refinements for a pole.
    pub stability: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { refinements: 2, noise_floor: 0.05, stability: 0.25 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridFit {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub c: f64,
    pub d: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleProbe {
    pub label: String,
    pub cutoff: usize,
    pub mean_density: f64,
    pub fits: Vec<GridFit>,
    pub residue_estimate: f64,
    pub verdict: Verdict,
}

/// Estimate of `sum b_n n^{-s}` for `s` near 1: partial sum plus the tail of
/// a series whose summatory function grows like `c x`.
fn near_one_value(seq: &EmbeddedSeq, s: f64, density: f64) -> f64 {
    let x = seq.cutoff() as f64;
    let mut sum = 0.0;
    for (i, b) in seq.coeffs.iter().enumerate() {
        sum += b.re * ((i + 1) as f64).powf(-s);
    }
    sum + density * x.powf(1.0 - s) / (s - 1.0)
}

/// Average of `A(n)/n` over `n` in `[X/2, X]`, where `A` is the summatory
/// function of the real parts.
fn mean_density(seq: &EmbeddedSeq) -> f64 {
    let x = seq.cutoff();
    let mut a = 0.0;
    let mut acc = 0.0;
    let mut cnt = 0usize;
    for (i, b) in seq.coeffs.iter().enumerate() {
        a += b.re;
        let n = i + 1;
        if 2 * n >= x {
            acc += a / n as f64;
            cnt += 1;
        }
    }
    acc / cnt.max(1) as f64
}

fn fit_pole(eps: &[f64], values: &[f64]) -> (f64, f64) {
    // least squares for v = c / eps + d
    let n = eps.len() as f64;
    let u: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    let su: f64 = u.iter().sum();
    let suu: f64 = u.iter().map(|x| x * x).sum();
    let sv: f64 = values.iter().sum();
    let suv: f64 = u.iter().zip(values).map(|(a, b)| a * b).sum();
    let det = n * suu - su * su;
    let c = (n * suv - su * sv) / det;
    let d = (sv - c * su) / n;
    (c, d)
}

/// Fits `c/eps + d` to the series near `s = 1` on a grid and its halvings.
pub fn pole_probe(seq: &EmbeddedSeq, grid: &[f64], cfg: &ProbeConfig) -> Result<PoleProbe> {
    if grid.len() < 2 {
        return Err(Error::Precondition("grid needs at least two points".into()));
    }
    if grid.iter().any(|&e| e <= 0.0) || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("grid must be positive and strictly decreasing".into()));
    }
    let density = mean_density(seq);
    let mut fits = vec![];
    for r in 0..=cfg.refinements {
        let scale = 0.5f64.powi(r as i32);
        let eps: Vec<f64> = grid.iter().map(|e| e * scale).collect();
        let values: Vec<f64> = eps.iter().map(|e| near_one_value(seq, 1.0 + e, density)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InsufficientCutoff { tail: f64::INFINITY, tol: 0.0 });
        }
        let (c, d) = fit_pole(&eps, &values);
        fits.push(GridFit { eps, values, c, d });
    }
    let cs: Vec<f64> = fits.iter().map(|f| f.c).collect();
    let last = *cs.last().unwrap();
    let verdict = if cs.iter().all(|c| c.abs() <= cfg.noise_floor) {
        Verdict::Bounded
    } else if cs.iter().all(|&c| c > cfg.noise_floor) && cs.iter().all(|c| (c - last).abs() <= cfg.stability * last.abs()) {
        Verdict::Pole
    } else {
        Verdict::Inconclusive
    };
    Ok(PoleProbe { label: seq.label.clone(), cutoff: seq.cutoff(), mean_density: density, fits, residue_estimate: last, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{delta_packet, delta_twist_packet};
    use crate::eigendata::base_change;
    use crate::exactnum::rat;

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn degenerate_satake_parameters() {
        let one = q(1);
        let split = asai_split_poly(&q(2), &q(2), &one, &one, &one);
        let x4 = Poly::new(vec![q(1), q(-4), q(6), q(-4), q(1)]);
        assert_eq!(split, x4);
        assert_eq!(sym2_poly(&q(2), &one, &one), Poly::new(vec![q(1), q(-3), q(3), q(-1)]));
    }

    #[test]
    fn delta_inert_two_over_q_sqrt5() {
        let pi = delta_packet(50).unwrap();
        let bc = base_change(&pi, 5).unwrap();
        assert_eq!(bc.ideal_coefficient(2).unwrap().as_rational(), Some(q(-3520)));
        let chi = DirichletCharacter::trivial(1);
        let chk = factorization_check(&pi, &bc, &chi, 2).unwrap();
        assert_eq!(chk.matched, Some(true));
        assert_eq!(factorization_check(&pi, &bc, &chi, 5).unwrap().matched, None);
        let seq = imprimitive_asai_coeffs(&bc, &chi, 30, BadPrimePolicy::Error).unwrap();
        assert_eq!(seq.b(1).as_rational(), Some(q(1)));
        assert_eq!(seq.b(2).as_rational(), Some(rat(-55, 32)));
    }

    #[test]
    fn twisted_packet_factorizes() {
        let pi = delta_twist_packet(200).unwrap();
        for d in [5u64, 8] {
            let bc = base_change(&pi, d).unwrap();
            for chi in [DirichletCharacter::trivial(1), DirichletCharacter::new(4, vec![1]).unwrap()] {
                for l in crate::exactnum::primes_up_to(200) {
                    let r = factorization_check(&pi, &bc, &chi, l).unwrap();
                    assert_ne!(r.matched, Some(false), "D={d} l={l} chi={chi}");
                }
            }
        }
    }

    #[test]
    fn definition_matches_euler_product() {
        let pi = delta_twist_packet(200).unwrap();
        let bc = base_change(&pi, 5).unwrap();
        let chi = DirichletCharacter::trivial(1);
        let seq = imprimitive_asai_coeffs(&bc, &chi, 200, BadPrimePolicy::Omit).unwrap();
        let factors = asai_unitary_factors(&bc, &chi, 200).unwrap();
        let good: Vec<u64> = factors.iter().map(|(l, _)| *l).collect();
        let ep = euler_product_coeffs(&factors, 200, &seq.field).unwrap();
        for n in 1..=200u64 {
            if supported_on(n, &good) {
                assert_eq!(seq.b(n as usize), ep.b(n as usize), "n = {n}");
            }
        }
    }

    #[test]
    fn zeta_values_in_interval() {
        let z = EmbeddedSeq::ones(100_000);
        let v2 = lseries_eval(&z, 2.0, 0.0, 1e-3).unwrap();
        assert!(v2.contains(1.644934066848226));
        let v3 = lseries_eval(&z, 3.0, 0.0, 1e-3).unwrap();
        assert!(v3.contains(1.2020569031595942));
        assert!(matches!(lseries_eval(&z, 1.0, 0.0, 1.0), Err(Error::Precondition(_))));
        assert!(matches!(lseries_eval(&EmbeddedSeq::ones(10), 1.5, 0.0, 1e-6), Err(Error::InsufficientCutoff { .. })));
    }

    #[test]
    fn probe_zeta_and_chi4() {
        let grid = [0.4, 0.3, 0.2, 0.1];
        let z = pole_probe(&EmbeddedSeq::ones(100_000), &grid, &ProbeConfig::default()).unwrap();
        assert_eq!(z.verdict, Verdict::Pole);
        assert!((z.residue_estimate - 1.0).abs() < 0.1);
        let chi4 = DirichletCharacter::new(4, vec![1]).unwrap();
        let l = pole_probe(&EmbeddedSeq::from_character(&chi4, 100_000), &grid, &ProbeConfig::default()).unwrap();
        assert_eq!(l.verdict, Verdict::Bounded);
    }

    #[test]
    fn distinguished_character_of_twist() {
        let pi = delta_twist_packet(20).unwrap();
        let eta = QuadCharacter::new(5).unwrap();
        let chi = distinguished_character(&pi, &eta);
        assert!(chi.is_trivial());
        assert!(crate::characters::distinguished_compatible(&chi, &pi.character.pow(2)));
    }
}
