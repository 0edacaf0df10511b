//! q-expansions of the two-parameter Eisenstein family, its flat and sharp
//! one-parameter slices, classical specializations and the `U_p`, `V_p`,
//! depletion calculus.
//!
//! Coefficients are kept symbolically as finite sums
//! `c * kappa1(a) * kappa2(b) * zeta_N^j` in the group ring, so operator
//! identities are checked exactly before any specialization.

use crate::exactnum::{bernoulli, rat_int, NumberField, NumberFieldElem, Padic, Rational, Ring};
use crate::iwasawa::{kubota_leopoldt, log1p, IwasawaElem, IwasawaFraction, WeightChar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Symbolic coefficient: `(a, b, j) -> c` stands for `c kappa1(a) kappa2(b) zeta_N^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymCoeff {
    terms: BTreeMap<(i64, i64, u64), Rational>,
}

/// One argument of a slice: `kappa * x^shift` or the fixed character `x^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Kappa(i64),
    Int(i64),
}

fn int_pow(a: i64, e: i64) -> Rational {
    let r = num_traits::pow(rat_int(a.unsigned_abs()), e.unsigned_abs() as usize);
    let r = if e < 0 { r.recip() } else { r };
    if a < 0 && e.rem_euclid(2) == 1 {
        -r
    } else {
        r
    }
}

impl SymCoeff {
    pub fn zero() -> Self {
        SymCoeff::default()
    }

    pub fn add_term(&mut self, a: i64, b: i64, j: u64, c: Rational) {
        let e = self.terms.entry((a, b, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64, u64), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &SymCoeff) -> SymCoeff {
        let mut out = self.clone();
        for (&(a, b, j), c) in &o.terms {
            out.add_term(a, b, j, -c.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SymCoeff {
        let mut out = SymCoeff::zero();
        for (&(a, b, j), c) in &self.terms {
            out.add_term(a, b, j, c * r);
        }
        out
    }

    /// One-parameter restriction `kappa1 = s1`, `kappa2 = s2`; the result
    /// carries the single variable in the first slot.
    pub fn slice(&self, s1: Slot, s2: Slot) -> SymCoeff {
        let mut out = SymCoeff::zero();
        for (&(a, b, j), c) in &self.terms {
            let mut g = 1i64;
            let mut c = c.clone();
            for (x, s) in [(a, s1), (b, s2)] {
                match s {
                    Slot::Kappa(shift) => {
                        g *= x;
                        c *= int_pow(x, shift);
                    }
                    Slot::Int(e) => c *= int_pow(x, e),
                }
            }
            out.add_term(g, 1, j, c);
        }
        out
    }

    /// Value at `kappa1 = x^k1`, `kappa2 = x^k2` in `Q(zeta_N)`.
    pub fn eval_int(&self, field: &Arc<NumberField>, k1: i64, k2: i64) -> NumberFieldElem {
        let mut acc = NumberFieldElem::zero(field);
        for (&(a, b, j), c) in &self.terms {
            let r = c * int_pow(a, k1) * int_pow(b, k2);
            acc = acc + NumberFieldElem::gen_pow(field, j).scale(&r);
        }
        acc
    }
}


/// `c*[a|b]*z^j` terms: `c kappa1(a) kappa2(b) zeta_N^j`.
impl std::fmt::Display for SymCoeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b, j), c)| if *j == 0 { format!("{c}*[{a}|{b}]") } else { format!("{c}*[{a}|{b}]*z^{j}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Kind of a symbolic family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Katz2,
    Flat,
    Sharp,
    /// A one-parameter slice of the two-parameter family.
    Slice,
}

/// Constant term of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constant {
    Absent,
    Zero,
    KubotaLeopoldt,
}

/// A q-expansion family of level `N` truncated at `q^trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpFamily {
    pub level: u64,
    pub p: u64,
    pub kind: FamilyKind,
    pub constant: Constant,
    coeffs: Vec<SymCoeff>,
}

fn check_level(n: u64, p: u64) -> Result<()> {
    if n == 0 || p < 3 || !crate::exactnum::is_prime(p) {
        return Err(Error::Precondition(format!("need N >= 1 and an odd prime p, got N = {n}, p = {p}")));
    }
    Ok(())
}

/// Signed factorizations `n = u v` with `u v > 0`.
fn factor_pairs(n: u64) -> Vec<(i64, i64)> {
    let mut out = vec![];
    let n = n as i64;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            for u in if d * d == n { vec![d] } else { vec![d, n / d] } {
                out.push((u, n / u));
                out.push((-u, -n / u));
            }
        }
        d += 1;
    }
    out
}

fn sgn(x: i64) -> Rational {
    rat_int(x.signum())
}

impl QExpFamily {
    fn build(level: u64, p: u64, trunc: usize, kind: FamilyKind, f: impl Fn(i64, i64, &mut SymCoeff)) -> Result<Self> {
        check_level(level, p)?;
        let mut coeffs = vec![SymCoeff::zero(); trunc + 1];
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            for (u, v) in factor_pairs(n as u64) {
                f(u, v, c);
            }
        }
        let constant = if kind == FamilyKind::Flat { Constant::KubotaLeopoldt } else { Constant::Absent };
        Ok(QExpFamily { level, p, kind, constant, coeffs })
    }

    /// `sum u^k1 v^k2 sgn(u) zeta^v` over `uv = n`, `p` prime to `uv`.
    pub fn katz(level: u64, p: u64, trunc: usize) -> Result<Self> {
        let pi = p as i64;
        Self::build(level, p, trunc, FamilyKind::Katz2, |u, v, c| {
            if u % pi != 0 && v % pi != 0 {
                c.add_term(u, v, v.rem_euclid(level as i64) as u64, sgn(u));
            }
        })
    }

    /// `sum u^(kappa-1) sgn(u) zeta^v` over `uv = n`, `p` prime to `u`, with
    /// constant term `zeta_p(1 - kappa)`.
    pub fn flat(level: u64, p: u64, trunc: usize) -> Result<Self> {
        let pi = p as i64;
        Self::build(level, p, trunc, FamilyKind::Flat, |u, v, c| {
            if u % pi != 0 {
                c.add_term(u, 1, v.rem_euclid(level as i64) as u64, sgn(u) / rat_int(u));
            }
        })
    }

    /// `sum v^(kappa-1) sgn(u) zeta^v` over `uv = n`, `p` prime to `v`.
    pub fn sharp(level: u64, p: u64, trunc: usize) -> Result<Self> {
        let pi = p as i64;
        Self::build(level, p, trunc, FamilyKind::Sharp, |u, v, c| {
            if v % pi != 0 {
                c.add_term(v, 1, v.rem_euclid(level as i64) as u64, sgn(u) / rat_int(v));
            }
        })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[SymCoeff] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&SymCoeff> {
        self.coeffs.get(n).ok_or_else(|| Error::Precondition(format!("q^{n} beyond truncation {}", self.truncation())))
    }

    pub fn field(&self) -> Arc<NumberField> {
        NumberField::cyclotomic(self.level)
    }

    /// One-parameter slice of a two-parameter family.
    pub fn slice(&self, s1: Slot, s2: Slot) -> Result<Self> {
        if self.kind != FamilyKind::Katz2 {
            return Err(Error::Precondition("slices are taken of the two-parameter family".into()));
        }
        Ok(QExpFamily {
            kind: FamilyKind::Slice,
            coeffs: self.coeffs.iter().map(|c| c.slice(s1, s2)).collect(),
            ..self.clone()
        })
    }

    pub fn u_p(&self) -> Result<Self> {
        Ok(QExpFamily { coeffs: u_p_seq(&self.coeffs, self.p)?, ..self.clone() })
    }

    pub fn v_p(&self) -> Self {
        QExpFamily { coeffs: v_p_seq(&self.coeffs, self.p, SymCoeff::zero()), ..self.clone() }
    }

    /// `1 - V_p U_p`: drops every coefficient with `p | n`, the constant included.
    pub fn deplete(&self) -> Self {
        let constant = if self.constant == Constant::Absent { Constant::Absent } else { Constant::Zero };
        QExpFamily { constant, coeffs: deplete_seq(&self.coeffs, self.p, SymCoeff::zero()), ..self.clone() }
    }

    /// Coefficients `n >= 1` at the integer weights `(k1, k2)` (one-parameter
    /// families ignore `k2`).
    pub fn eval_int(&self, k1: i64, k2: i64) -> Vec<NumberFieldElem> {
        let field = self.field();
        self.coeffs.iter().map(|c| c.eval_int(&field, k1, k2)).collect()
    }
}

/// `a_n -> a_{np}`; the truncation drops to `floor(trunc / p)`.
pub fn u_p_seq<C: Clone>(c: &[C], p: u64) -> Result<Vec<C>> {
    let t = (c.len() - 1) / p as usize;
    if t == 0 {
        return Err(Error::Precondition(format!("truncation {} too small for U_{p}", c.len() - 1)));
    }
    Ok((0..=t).map(|n| c[n * p as usize].clone()).collect())
}

/// `a_n` placed at `np`, keeping the truncation.
pub fn v_p_seq<C: Clone>(c: &[C], p: u64, zero: C) -> Vec<C> {
    let p = p as usize;
    (0..c.len()).map(|n| if n % p == 0 { c[n / p].clone() } else { zero.clone() }).collect()
}

pub fn deplete_seq<C: Clone>(c: &[C], p: u64, zero: C) -> Vec<C> {
    let p = p as usize;
    c.iter().enumerate().map(|(n, a)| if n % p == 0 { zero.clone() } else { a.clone() }).collect()
}

/// Teichmuller representative of `a` modulo `p^prec`.
pub fn teichmuller(a: i64, p: u64, prec: i64) -> Padic {
    let mut x = Padic::from_int(p, prec, a);
    for _ in 0..prec {
        x = x.pow(p);
    }
    x
}

/// Expansions of `kappa(a) = omega(a)^i (1+T)^{s(a)}` on one branch, with
/// `<a> = (1+p)^{s(a)}`.
pub struct BranchEvaluator {
    p: u64,
    branch: u64,
    prec: i64,
    m: usize,
    work: i64,
    log_gen: Padic,
    cache: HashMap<i64, Vec<Padic>>,
}

impl BranchEvaluator {
    pub fn new(p: u64, branch: u64, prec: i64, m: usize) -> Result<Self> {
        check_level(1, p)?;
        let work = prec + m as i64 + 10;
        let log_gen = log1p(&Padic::from_int(p, work, p), work)?;
        Ok(BranchEvaluator { p, branch: branch % (p - 1), prec, m, work, log_gen, cache: HashMap::new() })
    }

    pub fn kappa_series(&mut self, a: i64) -> Result<Vec<Padic>> {
        if let Some(s) = self.cache.get(&a) {
            return Ok(s.clone());
        }
        if a % self.p as i64 == 0 {
            return Err(Error::Precondition(format!("{a} is not a p-adic unit")));
        }
        let w = self.work;
        let om = teichmuller(a, self.p, w);
        let unit = Padic::from_int(self.p, w, a).try_div(&om)?;
        let s = log1p(&(unit - Padic::from_int(self.p, w, 1)), w)?.try_div(&self.log_gen)?;
        let lead = om.pow(self.branch);
        let mut b = Padic::from_int(self.p, w, 1);
        let mut out = Vec::with_capacity(self.m);
        for d in 0..self.m as i64 {
            if d > 0 {
                b = (b * (s.clone() - Padic::from_int(self.p, w, d - 1))).try_div(&Padic::from_int(self.p, w, d))?;
            }
            out.push(b.clone() * lead.clone());
        }
        self.cache.insert(a, out.clone());
        Ok(out)
    }

    /// A one-parameter symbolic coefficient as coordinates over the power
    /// basis of `Q(zeta_N)`.
    pub fn eval(&mut self, c: &SymCoeff, field: &Arc<NumberField>) -> Result<Vec<IwasawaElem>> {
        let deg = field.degree();
        let mut coords = vec![vec![Padic::zero(self.p, self.work); self.m]; deg];
        for (&(a, b, j), r) in c.terms() {
            if b != 1 {
                return Err(Error::Precondition("branch evaluation needs a one-parameter family".into()));
            }
            let ser = self.kappa_series(a)?;
            let z = NumberFieldElem::gen_pow(field, j);
            for (t, zc) in z.coords().iter().enumerate() {
                if zc.is_zero() {
                    continue;
                }
                let scale = Padic::from_rational(&(r * zc), self.p, self.work);
                for (d, s) in ser.iter().enumerate() {
                    coords[t][d] = coords[t][d].clone() + s.clone() * scale.clone();
                }
            }
        }
        coords.into_iter().map(|c| IwasawaElem::new(self.p, self.branch, self.prec, c)).collect()
    }
}

impl QExpFamily {
    /// Coefficient of `q^n` on a branch, as coordinates in `Q(zeta_N)`.
    pub fn branch_coeff(&self, n: usize, branch: u64, prec: i64, m: usize) -> Result<Vec<IwasawaElem>> {
        if self.kind == FamilyKind::Katz2 {
            return Err(Error::Precondition("take a slice of the two-parameter family first".into()));
        }
        BranchEvaluator::new(self.p, branch, prec, m)?.eval(self.coeff(n)?, &self.field())
    }

    /// All coefficients `1..=trunc` on a branch with a shared cache.
    pub fn branch_coeffs(&self, branch: u64, prec: i64, m: usize) -> Result<Vec<Vec<IwasawaElem>>> {
        if self.kind == FamilyKind::Katz2 {
            return Err(Error::Precondition("take a slice of the two-parameter family first".into()));
        }
        let mut ev = BranchEvaluator::new(self.p, branch, prec, m)?;
        let field = self.field();
        self.coeffs[1..].iter().map(|c| ev.eval(c, &field)).collect()
    }

    pub fn constant_term(&self, branch: u64, prec: i64, m: usize) -> Result<Option<IwasawaFraction>> {
        match self.constant {
            Constant::Absent => Ok(None),
            Constant::KubotaLeopoldt => Ok(Some(kubota_leopoldt(self.p, branch, prec, m)?)),
            Constant::Zero => {
                let z = IwasawaElem::constant(self.p, branch, prec, m, &Rational::zero())?;
                Ok(Some(IwasawaFraction::from_elem(z)))
            }
        }
    }
}

fn single(level: u64, p: u64, n: u64, kind: FamilyKind) -> Result<SymCoeff> {
    if n == 0 {
        return Err(Error::Precondition("non-constant coefficients start at n = 1".into()));
    }
    check_level(level, p)?;
    let pi = p as i64;
    let mut c = SymCoeff::zero();
    for (u, v) in factor_pairs(n) {
        let j = v.rem_euclid(level as i64) as u64;
        match kind {
            FamilyKind::Katz2 if u % pi != 0 && v % pi != 0 => c.add_term(u, v, j, sgn(u)),
            FamilyKind::Flat if u % pi != 0 => c.add_term(u, 1, j, sgn(u) / rat_int(u)),
            FamilyKind::Sharp if v % pi != 0 => c.add_term(v, 1, j, sgn(u) / rat_int(v)),
            _ => {}
        }
    }
    Ok(c)
}

/// Coefficient of `q^n` (`n >= 1`) in the two-parameter family, symbolically.
pub fn katz_coeff(level: u64, p: u64, n: u64) -> Result<SymCoeff> {
    single(level, p, n, FamilyKind::Katz2)
}

pub fn flat_coeff(level: u64, p: u64, n: u64) -> Result<SymCoeff> {
    single(level, p, n, FamilyKind::Flat)
}

pub fn sharp_coeff(level: u64, p: u64, n: u64) -> Result<SymCoeff> {
    single(level, p, n, FamilyKind::Sharp)
}

/// Which of Kato's two Eisenstein series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KatoKind {
    E,
    F,
}

/// Classical q-expansion with coefficients in `Q(zeta_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalQExp {
    pub kind: KatoKind,
    pub weight: u32,
    pub level: u64,
    /// `zeta(1-k)` for the F series; unspecified (`None`) for the E series.
    pub constant: Option<Rational>,
    pub coeffs: Vec<NumberFieldElem>,
}

/// `F`: `sum u^(k-1) sgn(u) zeta^v`; `E`: `sum v^(k-1) sgn(u) zeta^v`, over
/// `uv = n > 0`.
pub fn classical_kato(kind: KatoKind, k: u32, level: u64, trunc: usize) -> Result<ClassicalQExp> {
    if k == 0 || level == 0 {
        return Err(Error::Precondition("need k >= 1 and N >= 1".into()));
    }
    let field = NumberField::cyclotomic(level);
    let e = k as i64 - 1;
    let constant = match kind {
        KatoKind::F => Some(-bernoulli(k as usize) / rat_int(k)),
        KatoKind::E => None,
    };
    let mut coeffs = vec![NumberFieldElem::from_rational(&field, constant.clone().unwrap_or_else(Rational::zero))];
    for n in 1..=trunc as u64 {
        let mut acc = NumberFieldElem::zero(&field);
        for (u, v) in factor_pairs(n) {
            let r = match kind {
                KatoKind::F => int_pow(u, e),
                KatoKind::E => int_pow(v, e),
            } * sgn(u);
            acc = acc + NumberFieldElem::gen_pow(&field, v.rem_euclid(level as i64) as u64).scale(&r);
        }
        coeffs.push(acc);
    }
    Ok(ClassicalQExp { kind, weight: k, level, constant, coeffs })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StabilizationReport {
    pub k: u32,
    pub level: u64,
    pub p: u64,
    pub truncation: usize,
    pub precision: i64,
    /// Indices `n >= 1` where the coefficients differ.
    pub mismatches: Vec<usize>,
    pub constant_match: bool,
    pub constant_convention: String,
}

impl StabilizationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.constant_match
    }
}

/// Compares the flat family at weight `k` with `F - p^(k-1) V_p F`.
pub fn stabilization_compare(
    flat_at_k: &[NumberFieldElem],
    flat_constant: &Padic,
    classical: &ClassicalQExp,
    p: u64,
    prec: i64,
) -> Result<StabilizationReport> {
    let trunc = flat_at_k.len().min(classical.coeffs.len()) - 1;
    let pk = rat_int(BigInt::from(p).pow(classical.weight - 1));
    let vf = v_p_seq(&classical.coeffs, p, NumberFieldElem::zero(&classical.coeffs[0].field().clone()));
    let mismatches = (1..=trunc)
        .filter(|&n| {
            let target = classical.coeffs[n].clone() - vf[n].scale(&pk);
            flat_at_k[n] != target
        })
        .collect();
    let c = classical.constant.clone().ok_or_else(|| Error::Precondition("E series has no constant convention".into()))?;
    let expected = Padic::from_rational(&((Rational::one() - pk) * c), p, prec);
    if flat_constant.precision() < prec {
        return Err(Error::Precision(format!(
            "constant term known mod {p}^{}, need {prec}",
            flat_constant.precision()
        )));
    }
    Ok(StabilizationReport {
        k: classical.weight,
        level: classical.level,
        p,
        truncation: trunc,
        precision: prec,
        mismatches,
        constant_match: *flat_constant == expected,
        constant_convention: "F constant term zeta(1-k) = -B_k/k".into(),
    })
}

/// The flat family at an even weight `k >= 2` is the ordinary
/// `p`-stabilization of the classical F series.
pub fn stabilization_check(k: u32, level: u64, p: u64, trunc: usize, prec: i64) -> Result<StabilizationReport> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Precondition(format!("weight {k}: need an even weight >= 2")));
    }
    let flat = QExpFamily::flat(level, p, trunc)?;
    let at_k = flat.eval_int(k as i64, 0);
    let m = crate::iwasawa::kl_truncation(p, prec);
    let zeta = kubota_leopoldt(p, k as u64 % (p - 1), prec, m)?;
    let c = zeta.eval_at_weight(&WeightChar::Int(k as i64))?;
    let classical = classical_kato(KatoKind::F, k, level, trunc)?;
    stabilization_compare(&at_k, &c, &classical, p, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::iwasawa::residue_at_trivial;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    #[test]
    fn katz_first_coefficient() {
        let c = katz_coeff(1, 5, 1).unwrap();
        for k in 2..8 {
            let expected = if k % 2 == 0 { 2 } else { 0 };
            assert_eq!(c.eval_int(&q(), 0, k - 1), NumberFieldElem::from_int(&q(), expected));
        }
        assert!(katz_coeff(1, 5, 5).unwrap().is_zero());
        assert!(katz_coeff(5, 5, 1).is_ok());
        assert!(katz_coeff(1, 2, 1).is_err());
        assert!(katz_coeff(0, 5, 1).is_err());
    }

    #[test]
    fn flat_and_sharp_small() {
        for k in [2i64, 3, 4] {
            let e = NumberFieldElem::from_int(&q(), 1 + (-1i64).pow(k as u32));
            assert_eq!(flat_coeff(1, 5, 1).unwrap().eval_int(&q(), k, 0), e);
            assert_eq!(flat_coeff(1, 5, 5).unwrap().eval_int(&q(), k, 0), e);
            assert_eq!(sharp_coeff(1, 5, 1).unwrap().eval_int(&q(), k, 0), e);
            assert_eq!(sharp_coeff(1, 5, 5).unwrap().eval_int(&q(), k, 0), e);
        }
    }

    #[test]
    fn depletion_identities() {
        for level in [1u64, 3, 4] {
            for p in [5u64, 7] {
                let katz = QExpFamily::katz(level, p, 120).unwrap();
                let flat = QExpFamily::flat(level, p, 120).unwrap();
                let sharp = QExpFamily::sharp(level, p, 120).unwrap();
                let s1 = katz.slice(Slot::Kappa(-1), Slot::Int(0)).unwrap();
                let s2 = katz.slice(Slot::Int(0), Slot::Kappa(-1)).unwrap();
                assert_eq!(flat.deplete().coeffs(), s1.coeffs());
                assert_eq!(sharp.deplete().coeffs(), s2.coeffs());
                if level > 1 {
                    assert_ne!(s1.coeffs(), s2.coeffs());
                }
                assert!(katz.u_p().unwrap().coeffs().iter().all(|c| c.is_zero()));
                let uv = flat.v_p().u_p().unwrap();
                assert_eq!(uv.coeffs()[1..], flat.coeffs()[1..=uv.truncation()]);
            }
        }
    }

    #[test]
    fn classical_weight_two() {
        let f = classical_kato(KatoKind::F, 2, 1, 4).unwrap();
        assert_eq!(f.constant, Some(rat(-1, 12)));
        assert_eq!(f.coeffs[1], NumberFieldElem::from_int(&q(), 2));
        assert_eq!(f.coeffs[2], NumberFieldElem::from_int(&q(), 6));
        let e = classical_kato(KatoKind::E, 2, 1, 4).unwrap();
        assert_eq!(e.coeffs[1], f.coeffs[1]);
        assert_eq!(e.constant, None);
    }

    #[test]
    fn stabilization() {
        assert!(stabilization_check(2, 1, 5, 200, 8).unwrap().passed());
        assert!(stabilization_check(4, 3, 5, 60, 8).unwrap().passed());
        let flat = QExpFamily::flat(1, 5, 30).unwrap().eval_int(2, 0);
        let mut classical = classical_kato(KatoKind::F, 2, 1, 30).unwrap();
        classical.coeffs[7] = classical.coeffs[7].clone() + NumberFieldElem::from_int(&q(), 1);
        let c = Padic::from_rational(&(rat(-1, 12) * rat(-4, 1)), 5, 8);
        let r = stabilization_compare(&flat, &c, &classical, 5, 8).unwrap();
        assert_eq!(r.mismatches, vec![7]);
        assert!(!r.passed());
    }

    #[test]
    fn branch_values_match_integer_specialization() {
        let (level, p, k) = (4u64, 5u64, 6i64);
        let flat = QExpFamily::flat(level, p, 12).unwrap();
        let br = flat.branch_coeffs(k as u64 % (p - 1), 8, 16).unwrap();
        let exact = flat.eval_int(k, 0);
        for n in 1..=12 {
            for (t, coord) in br[n - 1].iter().enumerate() {
                let v = coord.eval_at_weight(&WeightChar::Int(k)).unwrap();
                assert!(v.precision() >= 8);
                assert_eq!(v, Padic::from_rational(&exact[n].coords()[t], p, 8), "n={n} coord {t}");
            }
        }
    }

    #[test]
    fn family_residue() {
        let p = 5;
        let flat = QExpFamily::flat(1, p, 6).unwrap();
        let c = flat.constant_term(0, 8, 16).unwrap().unwrap();
        assert_eq!(residue_at_trivial(&c).unwrap(), Padic::from_rational(&rat(-4, 5), p, 8));
        for coeff in flat.branch_coeffs(0, 8, 12).unwrap() {
            for x in coeff {
                assert!(residue_at_trivial(&IwasawaFraction::from_elem(x)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn growth_bound() {
        let flat = QExpFamily::flat(5, 7, 60).unwrap();
        let k = 4u32;
        for (n, c) in flat.eval_int(k as i64, 0).iter().enumerate().skip(1) {
            let sigma: f64 = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(k as i32 - 1)).sum();
            for i in 0..c.num_embeddings() {
                assert!(c.embed(i).norm() <= 2.0 * sigma + 1e-6);
            }
        }
    }
}
