use super::{int_valuation, Field, Rational, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of `Q_p` known modulo `p^prec` (absolute precision).
///
/// Stored as `value / p^shift` with `0 <= value < p^(prec + shift)`; when
/// `shift > 0` the value is a unit, so `-shift` is the valuation.
#[derive(Clone)]
pub struct Padic {
    p: u64,
    prec: i64,
    shift: i64,
    value: BigInt,
}

fn ppow(p: u64, k: i64) -> BigInt {
    if k <= 0 {
        BigInt::one()
    } else {
        num_traits::pow(BigInt::from(p), k as usize)
    }
}

fn pmod(x: &BigInt, p: u64, k: i64) -> BigInt {
    if k <= 0 {
        return BigInt::zero();
    }
    x.mod_floor(&ppow(p, k))
}

fn inv_mod(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = x.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

impl Padic {
    fn build(p: u64, prec: i64, shift: i64, value: BigInt) -> Self {
        let mut x = Padic { p, prec, shift, value: pmod(&value, p, prec + shift) };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.value.is_zero() {
            self.shift = 0;
            return;
        }
        let pb = BigInt::from(self.p);
        while self.shift > 0 && (&self.value % &pb).is_zero() {
            self.value /= &pb;
            self.shift -= 1;
        }
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        Padic { p, prec, shift: 0, value: BigInt::zero() }
    }

    pub fn from_int(p: u64, prec: i64, n: impl Into<BigInt>) -> Self {
        Self::build(p, prec, 0, n.into())
    }

    pub fn from_rational(r: &Rational, p: u64, prec: i64) -> Self {
        if r.is_zero() {
            return Self::zero(p, prec);
        }
        let a = int_valuation(r.denom(), p) as i64;
        let d_unit = r.denom() / ppow(p, a);
        let m = ppow(p, (prec + a).max(0));
        let inv = inv_mod(&d_unit, &m).expect("unit denominator");
        Self::build(p, prec, a, r.numer() * inv)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation, or `None` if the element is zero to working precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.value.is_zero() {
            None
        } else {
            Some(int_valuation(&self.value, self.p) as i64 - self.shift)
        }
    }

    /// Valuation, with zero-at-precision elements reporting their precision.
    pub fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn reduce(&self, prec: i64) -> Self {
        Self::build(self.p, self.prec.min(prec), self.shift, self.value.clone())
    }

    /// The canonical rational representative `value / p^shift`.
    pub fn lift(&self) -> Rational {
        Rational::new(self.value.clone(), ppow(self.p, self.shift))
    }

    /// Integer representative in `[0, p^prec)`, for integral elements.
    pub fn residue(&self) -> Option<BigInt> {
        if self.shift > 0 {
            None
        } else {
            Some(self.value.clone())
        }
    }

    /// Base-p digits starting at the valuation: `(valuation, digits)`.
    pub fn digits(&self) -> (i64, Vec<u64>) {
        let Some(v) = self.valuation() else {
            return (self.prec, vec![]);
        };
        let pb = BigInt::from(self.p);
        let mut m = &self.value / ppow(self.p, v + self.shift);
        let mut out = vec![];
        for _ in v..self.prec {
            let d = (&m % &pb).to_u64_digits().1.first().copied().unwrap_or(0);
            out.push(d);
            m /= &pb;
        }
        (v, out)
    }

    pub fn digit_string(&self) -> String {
        let (v, d) = self.digits();
        if d.is_empty() {
            return format!("O({}^{})", self.p, self.prec);
        }
        let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        format!("v={v}:[{}]", ds.join(","))
    }

    pub fn inv(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::DivisionByZero);
        };
        let p = self.p;
        // self = u * p^v with u known mod p^(prec - v)
        let u = &self.value / ppow(p, v + self.shift);
        let rel = self.prec - v;
        let m = ppow(p, rel.max(0));
        let uinv = inv_mod(&u, &m).ok_or(Error::DivisionByZero)?;
        let prec = self.prec - 2 * v;
        Ok(if v >= 0 { Self::build(p, prec, v, uinv) } else { Self::build(p, prec, 0, uinv * ppow(p, -v)) })
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.clone() * o.inv()?)
    }

    /// Multiplication by `p^k` (exact).
    pub fn mul_p_pow(&self, k: i64) -> Self {
        if k >= 0 {
            if self.shift >= k {
                Self::build(self.p, self.prec + k, self.shift - k, self.value.clone())
            } else {
                Self::build(self.p, self.prec + k, 0, &self.value * ppow(self.p, k - self.shift))
            }
        } else {
            Self::build(self.p, self.prec + k, self.shift - k, self.value.clone())
        }
    }

    fn check_p(&self, o: &Self) {
        assert_eq!(self.p, o.p, "p-adic numbers for different primes");
    }
}

impl Add for Padic {
    type Output = Padic;
    fn add(self, o: Padic) -> Padic {
        self.check_p(&o);
        let shift = self.shift.max(o.shift);
        let v = &self.value * ppow(self.p, shift - self.shift) + &o.value * ppow(self.p, shift - o.shift);
        Padic::build(self.p, self.prec.min(o.prec), shift, v)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        let v = -self.value;
        Padic::build(self.p, self.prec, self.shift, v)
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, o: Padic) -> Padic {
        self + (-o)
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, o: Padic) -> Padic {
        self.check_p(&o);
        let prec = (self.prec + o.valuation_bound()).min(o.prec + self.valuation_bound());
        Padic::build(self.p, prec, self.shift + o.shift, &self.value * &o.value)
    }
}

impl PartialEq for Padic {
    fn eq(&self, o: &Padic) -> bool {
        self.p == o.p && (self.clone() - o.clone()).is_zero()
    }
}

impl Ring for Padic {
    fn zero_like(&self) -> Self {
        Padic::zero(self.p, self.prec.max(0))
    }
    fn one_like(&self) -> Self {
        Padic::from_int(self.p, self.prec.max(0), 1)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Padic {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.lift(), self.p, self.prec)
    }
}

#[derive(Serialize)]
struct PadicRepr {
    p: u64,
    precision: i64,
    valuation: Option<i64>,
    digits: Vec<u64>,
}

impl Serialize for Padic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (v, digits) = self.digits();
        PadicRepr { p: self.p, precision: self.prec, valuation: self.valuation().map(|_| v), digits }
            .serialize(s)
    }
}

/// The root `alpha` of `X^2 - a X + b` with `alpha = a mod p`, for `a` a unit
/// and `v(b) > 0`, correct modulo `p^n`.
pub fn hensel_unit_root(a: &Padic, b: &Padic, n: i64) -> Result<Padic> {
    match a.valuation() {
        Some(0) => {}
        _ => return Err(Error::NotOrdinary(format!("trace {a} is not a p-adic unit"))),
    }
    if b.valuation().is_some_and(|v| v <= 0) {
        return Err(Error::Precondition(format!("norm {b} must have positive valuation")));
    }
    if a.precision() < n || b.precision() < n {
        return Err(Error::Precision(format!("inputs known to fewer than {n} digits")));
    }
    let a = a.reduce(n);
    let b = b.reduce(n);
    let mut x = a.reduce(1).reduce(n);
    x = Padic::build(a.p, n, 0, x.value.clone());
    let mut digits = 1;
    while digits < 2 * n {
        let f = x.clone() * x.clone() - a.clone() * x.clone() + b.clone();
        let df = x.clone() + x.clone() - a.clone();
        x = (x - f * df.inv()?).reduce(n);
        digits *= 2;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn rational_embedding_and_inverse() {
        let x = Padic::from_rational(&rat(-31, 30), 5, 10);
        assert_eq!(x.valuation(), Some(-1));
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(1));
        assert_eq!(y, Padic::from_rational(&rat(-30, 31), 5, 12));
        assert_eq!(x.clone() * y, Padic::from_int(5, 8, 1));
    }

    #[test]
    fn precision_is_minimum_on_addition() {
        let a = Padic::from_int(7, 5, 3);
        let b = Padic::from_int(7, 9, 4);
        assert_eq!((a.clone() + b.clone()).precision(), 5);
        // multiplication: min(n1 + v(b), n2 + v(a))
        let c = Padic::from_int(7, 9, 49);
        assert_eq!((a * c).precision(), 7);
    }

    #[test]
    fn one_minus_one_over_p() {
        let x = Padic::from_int(5, 10, 1) - Padic::from_int(5, 10, 1).mul_p_pow(-1);
        assert_eq!(x, Padic::from_rational(&rat(4, 5), 5, 10));
        assert_eq!(x.valuation(), Some(-1));
    }

    #[test]
    fn unit_root_trivial_cases() {
        let one = Padic::from_int(5, 8, 1);
        let zero = Padic::zero(5, 8);
        assert_eq!(hensel_unit_root(&one, &zero, 8).unwrap(), one);
        let r = hensel_unit_root(&Padic::from_int(5, 8, 6), &Padic::from_int(5, 8, 5), 8).unwrap();
        assert_eq!(r, one);
    }

    #[test]
    fn unit_root_matches_exhaustive_search() {
        // X^2 - 6X + 35 at p = 5, n = 6
        let n = 6;
        let a = Padic::from_int(5, n, 6);
        let b = Padic::from_int(5, n, 35);
        let r = hensel_unit_root(&a, &b, n).unwrap();
        let m: i64 = 5i64.pow(n as u32);
        let roots: Vec<i64> = (0..m).filter(|x| (x * x - 6 * x + 35).rem_euclid(m) == 0 && x % 5 == 1).collect();
        assert_eq!(roots.len(), 1);
        assert_eq!(r.residue().unwrap(), BigInt::from(roots[0]));
    }

    #[test]
    fn non_ordinary_rejected() {
        let a = Padic::from_int(5, 6, 10);
        let b = Padic::from_int(5, 6, 5);
        assert!(matches!(hensel_unit_root(&a, &b, 6), Err(Error::NotOrdinary(_))));
    }
}
