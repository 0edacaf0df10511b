//! Branch-decomposed elements of the Iwasawa algebra of `Z_p^x`, evaluation at
//! weight characters, the logarithm map and the Kubota-Leopoldt zeta function.
//!
//! The coordinate on each branch is `T = kappa(1+p) - 1`.

use crate::exactnum::{bernoulli_table, rat_int, Padic, PowerSeries, Rational, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

/// Weight character: `x -> x^k`, or a point `(branch, T)` on a branch.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightChar {
    Int(i64),
    Point { branch: u64, t: Padic },
}

impl WeightChar {
    pub fn branch(&self, p: u64) -> u64 {
        match self {
            WeightChar::Int(k) => k.rem_euclid(p as i64 - 1) as u64,
            WeightChar::Point { branch, .. } => *branch,
        }
    }

    /// The coordinate `(1+p)^k - 1` (exact for integer weights).
    pub fn t_value(&self, p: u64, prec: i64) -> Padic {
        match self {
            WeightChar::Int(k) => Padic::from_rational(&t_of_int(p, *k), p, prec),
            WeightChar::Point { t, .. } => t.clone(),
        }
    }
}

pub fn t_of_int(p: u64, k: i64) -> Rational {
    let base = rat_int(p + 1);
    let pw = if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), k.unsigned_abs() as usize)
    };
    pw - Rational::one()
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !crate::exactnum::is_prime(p) {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// Power series in `T` over `Z_p` on one branch `i mod (p-1)`, truncated at
/// `T^m`, with values meaningful modulo `p^n`.
#[derive(Clone, Debug)]
pub struct IwasawaElem {
    pub p: u64,
    pub branch: u64,
    pub n: i64,
    series: PowerSeries<Padic>,
}

impl IwasawaElem {
    pub fn new(p: u64, branch: u64, n: i64, coeffs: Vec<Padic>) -> Result<Self> {
        check_p(p)?;
        if coeffs.is_empty() {
            return Err(Error::Precondition("need at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| c.p() != p) {
            return Err(Error::Precondition("coefficients over a different prime".into()));
        }
        Ok(IwasawaElem { p, branch: branch % (p - 1), n, series: PowerSeries::new(coeffs) })
    }

    pub fn from_rationals(p: u64, branch: u64, n: i64, coeffs: &[Rational]) -> Result<Self> {
        let c = coeffs.iter().map(|r| Padic::from_rational(r, p, n)).collect();
        IwasawaElem::new(p, branch, n, c)
    }

    pub fn constant(p: u64, branch: u64, n: i64, m: usize, c: &Rational) -> Result<Self> {
        let mut v = vec![Rational::zero(); m.max(1)];
        v[0] = c.clone();
        IwasawaElem::from_rationals(p, branch, n, &v)
    }

    /// The coordinate `T` itself.
    pub fn t(p: u64, branch: u64, n: i64, m: usize) -> Result<Self> {
        let mut v = vec![Rational::zero(); m.max(2)];
        v[1] = Rational::one();
        IwasawaElem::from_rationals(p, branch, n, &v)
    }

    /// Truncation order in `T`.
    pub fn m(&self) -> usize {
        self.series.len()
    }

    pub fn coeffs(&self) -> &[Padic] {
        self.series.coeffs()
    }

    pub fn series(&self) -> &PowerSeries<Padic> {
        &self.series
    }

    /// `T`-adic order, `None` if zero to precision.
    pub fn t_order(&self) -> Option<usize> {
        self.series.order()
    }

    fn with_series(&self, series: PowerSeries<Padic>, n: i64) -> Self {
        IwasawaElem { p: self.p, branch: self.branch, n, series }
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::Precondition("elements over different primes".into()));
        }
        if self.branch != o.branch {
            return Err(Error::BranchMismatch { elem: self.branch, weight: o.branch });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        Ok(self.with_series(self.series.clone() + o.series.clone(), self.n.min(o.n)))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        Ok(self.with_series(self.series.clone() * o.series.clone(), self.n.min(o.n)))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        self.with_series(self.series.scale(c), self.n)
    }

    /// Value at a point of the branch. Terms beyond `T^m` are bounded by
    /// `|T|^m` times the smallest stored coefficient, which caps the
    /// returned precision.
    pub fn eval_at_weight(&self, w: &WeightChar) -> Result<Padic> {
        let wb = w.branch(self.p);
        if wb != self.branch {
            return Err(Error::BranchMismatch { elem: self.branch, weight: wb });
        }
        let t = w.t_value(self.p, self.n + self.m() as i64 + 10);
        let mut cap = self.n;
        if let Some(v) = t.valuation() {
            if v < 1 {
                return Err(Error::Precondition(format!("T = {t} outside the open unit disc")));
            }
            let cmin = self.coeffs().iter().filter_map(|c| c.valuation()).min().unwrap_or(0).min(0);
            cap = cap.min(self.m() as i64 * v + cmin);
        }
        let val = self.series.eval(&t);
        Ok(val.reduce(cap))
    }

    pub fn to_report(&self) -> ElemReport {
        ElemReport {
            p: self.p,
            branch: self.branch,
            n: self.n,
            m: self.m(),
            coefficients: self.coeffs().iter().map(|c| c.reduce(self.n).to_string()).collect(),
        }
    }
}

impl PartialEq for IwasawaElem {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.branch == o.branch && self.series == o.series
    }
}

impl Add for IwasawaElem {
    type Output = IwasawaElem;
    fn add(self, o: IwasawaElem) -> IwasawaElem {
        self.try_add(&o).expect("compatible Iwasawa elements")
    }
}

impl Neg for IwasawaElem {
    type Output = IwasawaElem;
    fn neg(self) -> IwasawaElem {
        let s = -self.series.clone();
        self.with_series(s, self.n)
    }
}

impl Sub for IwasawaElem {
    type Output = IwasawaElem;
    fn sub(self, o: IwasawaElem) -> IwasawaElem {
        self + (-o)
    }
}

impl Mul for IwasawaElem {
    type Output = IwasawaElem;
    fn mul(self, o: IwasawaElem) -> IwasawaElem {
        self.try_mul(&o).expect("compatible Iwasawa elements")
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ElemReport {
    pub p: u64,
    pub branch: u64,
    pub n: i64,
    pub m: usize,
    pub coefficients: Vec<String>,
}

/// Quotient of two elements on the same branch.
#[derive(Clone, Debug)]
pub struct IwasawaFraction {
    pub num: IwasawaElem,
    pub den: IwasawaElem,
    pole_order: usize,
}

impl IwasawaFraction {
    pub fn new(num: IwasawaElem, den: IwasawaElem) -> Result<Self> {
        num.check_compatible(&den)?;
        let Some(od) = den.t_order() else {
            return Err(Error::DivisionByZero);
        };
        let on = num.t_order().unwrap_or(usize::MAX);
        let pole_order = od.saturating_sub(on);
        Ok(IwasawaFraction { num, den, pole_order })
    }

    pub fn from_elem(f: IwasawaElem) -> Self {
        let one = IwasawaElem::constant(f.p, f.branch, f.n, f.m(), &Rational::one()).expect("valid prime");
        IwasawaFraction { num: f, den: one, pole_order: 0 }
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    pub fn branch(&self) -> u64 {
        self.num.branch
    }

    pub fn p(&self) -> u64 {
        self.num.p
    }

    pub fn eval_at_weight(&self, w: &WeightChar) -> Result<Padic> {
        let d = self.den.eval_at_weight(w)?;
        if d.is_zero() {
            return Err(Error::Pole);
        }
        let n = self.num.eval_at_weight(w)?;
        Ok(n.try_div(&d)?.reduce(self.num.n.min(self.den.n)))
    }

    pub fn to_report(&self) -> FractionReport {
        FractionReport { numerator: self.num.to_report(), denominator: self.den.to_report(), pole_order: self.pole_order }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FractionReport {
    pub numerator: ElemReport,
    pub denominator: ElemReport,
    pub pole_order: usize,
}

/// `log_p(1 + x)` for `v(x) >= 1`, modulo `p^prec`.
pub fn log1p(x: &Padic, prec: i64) -> Result<Padic> {
    let p = x.p();
    let Some(v) = x.valuation() else {
        return Ok(Padic::zero(p, prec));
    };
    if v < 1 {
        return Err(Error::Precondition(format!("log(1+x) needs v(x) >= 1, got {v}")));
    }
    let extra = (prec.max(1) as f64).log(p as f64).ceil() as i64 + 2;
    let x = x.reduce(prec + extra);
    let mut acc = Padic::zero(p, prec + extra);
    let mut pw = x.clone();
    let mut d = 1i64;
    // terms x^d / d have valuation at least d v - log_p d
    while d * v - (d as f64).log(p as f64).floor() as i64 <= prec + extra {
        let term = pw.try_div(&Padic::from_int(p, prec + 2 * extra, d))?;
        acc = if d % 2 == 1 { acc + term } else { acc - term };
        pw = pw * x.clone();
        d += 1;
    }
    Ok(acc.reduce(prec))
}

fn log_gen(p: u64, prec: i64) -> Padic {
    log1p(&Padic::from_int(p, prec + 2, p), prec + 2).expect("v(p) = 1")
}

/// `l(kappa) = log(kappa(1+p)) / log(1+p)`; exactly `k` at `x -> x^k`.
pub fn ell_log(p: u64, w: &WeightChar, n: i64) -> Result<Padic> {
    check_p(p)?;
    match w {
        WeightChar::Int(k) => Ok(Padic::from_int(p, n, *k)),
        WeightChar::Point { t, .. } => {
            let l = log1p(t, n + 2)?;
            Ok(l.try_div(&log_gen(p, n + 2))?.reduce(n))
        }
    }
}

/// `log(1+T) / log(1+p)` as an element on branch 0 truncated at `T^m`.
pub fn ell_series(p: u64, n: i64, m: usize) -> Result<IwasawaElem> {
    check_p(p)?;
    let w = n + 4 + (m.max(2) as f64).log(p as f64).ceil() as i64;
    let linv = log_gen(p, w + 2).inv()?;
    let mut coeffs = vec![Padic::zero(p, w)];
    for d in 1..m.max(2) as i64 {
        let c = linv.try_div(&Padic::from_int(p, w + 2, d))?;
        coeffs.push(if d % 2 == 1 { c } else { -c });
    }
    IwasawaElem::new(p, 0, n, coeffs)
}

/// `-(1 - p^{k-1}) B_k / k`, the value of the p-adic zeta function at `1-k`.
pub fn zeta_value(p: u64, k: u64, table: &[Rational]) -> Rational {
    let euler = Rational::one() - rat_int(BigInt::from(p).pow(k as u32 - 1));
    -(euler * table[k as usize].clone() / rat_int(k))
}

fn interpolation_weights(p: u64, branch: u64, count: usize) -> Vec<u64> {
    let start = if branch == 0 { p - 1 } else { branch };
    (0..count as u64).map(|j| start + (p - 1) * j).collect()
}

/// Interpolating polynomial through `(x_j, y_j)` in monomial form.
fn interpolate(xs: &[Padic], ys: &[Padic]) -> Result<Vec<Padic>> {
    let m = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..m {
        for j in (level..m).rev() {
            dd[j] = (dd[j].clone() - dd[j - 1].clone()).try_div(&(xs[j].clone() - xs[j - level].clone()))?;
        }
    }
    let zero = xs[0].zero_like();
    let mut poly = vec![dd[m - 1].clone()];
    for d in (0..m - 1).rev() {
        // poly = poly * (T - x_d) + dd[d]
        let mut next = vec![zero.clone(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c.clone();
            next[i] = next[i].clone() - c.clone() * xs[d].clone();
        }
        next[0] = next[0].clone() + dd[d].clone();
        poly = next;
    }
    Ok(poly)
}

/// Branch `i` of `zeta_p(1 - kappa)` from its values at `m` integers
/// `k = i mod (p-1)`. On branch 0 this is `g / T` with `g` interpolated from
/// `T * zeta_p(1-k)`.
pub fn kubota_leopoldt(p: u64, branch: u64, n: i64, m: usize) -> Result<IwasawaFraction> {
    check_p(p)?;
    let branch = branch % (p - 1);
    if branch % 2 == 1 {
        return Err(Error::Precondition(format!("odd branch {branch}: zeta_p is defined on even branches only")));
    }
    if m < 2 {
        return Err(Error::Precondition("truncation order must be at least 2".into()));
    }
    let ks = interpolation_weights(p, branch, m);
    let table = bernoulli_table(*ks.last().unwrap() as usize);
    let work = 2 * m as i64 + n + 10;
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for &k in &ks {
        let t = t_of_int(p, k as i64);
        let mut y = zeta_value(p, k, &table);
        if branch == 0 {
            y *= t.clone();
        }
        xs.push(Padic::from_rational(&t, p, work));
        // truncating at T^m perturbs values by O(p^m)
        ys.push(Padic::from_rational(&y, p, work).reduce(m as i64));
    }
    // the true coefficients are integral
    let coeffs: Vec<Padic> = interpolate(&xs, &ys)?
        .into_iter()
        .map(|c| if c.valuation().is_some_and(|v| v >= 0) { c } else { Padic::zero(p, c.precision().max(0)) })
        .collect();
    let achieved = coeffs.iter().enumerate().map(|(d, c)| c.precision() + d as i64).min().unwrap();
    // dividing by T costs v(T) >= 1 digits
    let target = if branch == 0 { n + 1 } else { n };
    let num = IwasawaElem::new(p, branch, target.min(achieved), coeffs)?;
    let den = if branch == 0 {
        IwasawaElem::t(p, 0, work, m)?
    } else {
        IwasawaElem::constant(p, branch, work, m, &Rational::one())?
    };
    IwasawaFraction::new(num, den)
}

/// A truncation order for which `kubota_leopoldt` reaches precision `n` at
/// weights prime to `p`.
pub fn kl_truncation(p: u64, n: i64) -> usize {
    (n + n / (p as i64 - 1) + 6) as usize
}

/// `lim l(kappa) f(kappa)` as `kappa` tends to the trivial character.
pub fn residue_at_trivial(f: &IwasawaFraction) -> Result<Padic> {
    if f.branch() != 0 {
        return Err(Error::BranchMismatch { elem: f.branch(), weight: 0 });
    }
    let p = f.p();
    let n = f.num.n.min(f.den.n);
    match f.pole_order() {
        0 => Ok(Padic::zero(p, n)),
        1 => {
            let a = f.num.t_order().expect("nonzero numerator at a pole");
            let lead = f.num.coeffs()[a].try_div(&f.den.coeffs()[a + 1])?;
            // l = T / log(1+p) + O(T^2)
            Ok(lead.try_div(&log_gen(p, n + 4))?.reduce(n))
        }
        e => Err(Error::Precondition(format!("pole of order {e} at the trivial character"))),
    }
}

/// Kummer congruence for `(1 - p^{k-1}) B_k / k` at `k1 = k2 mod p^a (p-1)`,
/// checked modulo `p^min(a+1, n)`.
pub fn kummer_check(p: u64, k1: u64, k2: u64, n: i64) -> Result<bool> {
    check_p(p)?;
    if k1 % (p - 1) == 0 || k2 % (p - 1) == 0 {
        return Err(Error::Precondition("Kummer congruence needs k not divisible by p-1".into()));
    }
    if k1 % (p - 1) != k2 % (p - 1) {
        return Err(Error::Precondition(format!("{k1} and {k2} lie on different branches")));
    }
    if k1 == k2 {
        return Ok(true);
    }
    let a = crate::exactnum::int_valuation(&BigInt::from(k1.abs_diff(k2)), p) as i64;
    let table = bernoulli_table(k1.max(k2) as usize);
    let diff = zeta_value(p, k1, &table) - zeta_value(p, k2, &table);
    let modulus = (a + 1).min(n);
    Ok(diff.is_zero() || Padic::from_rational(&diff, p, modulus).is_zero())
}
