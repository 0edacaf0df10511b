use super::{Field, MPoly, Rational, Ring};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Multivariate rational function over the rationals, kept in normal form:
/// coprime numerator and denominator, denominator with lex-leading
/// coefficient 1, zero represented as `0/1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalize(num, den))
    }

    fn normalize(num: MPoly, den: MPoly) -> Self {
        let nv = den.nvars();
        if num.is_zero() {
            return RatFun { num, den: MPoly::one(nv) };
        }
        let g = MPoly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = d.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFun { num: n, den: d }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let nv = p.nvars();
        RatFun { num: p, den: MPoly::one(nv) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFun::from_poly(MPoly::constant(nvars, c))
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        RatFun::constant(nvars, Rational::from_integer(n.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RatFun::from_poly(MPoly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.den.nvars()
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.clone() * o.inv()?)
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(RatFun::normalize(base.num.pow(e.unsigned_abs() as u32), base.den.pow(e.unsigned_abs() as u32)))
    }

    /// Substitutes `x_v -> value`.
    pub fn subs(&self, v: usize, value: &RatFun) -> Result<Self> {
        let sub = |p: &MPoly| -> RatFun {
            let mut acc = RatFun::constant(self.nvars(), Rational::zero());
            for c in p.as_univariate(v).iter().rev() {
                acc = acc * value.clone() + RatFun::from_poly(c.clone());
            }
            acc
        };
        sub(&self.num).try_div(&sub(&self.den))
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Equality in the quotient where `x_v^2 = q`.
    pub fn eq_mod_sqrt(&self, o: &RatFun, v: usize, q: &Rational) -> bool {
        let diff = self.num.clone() * o.den.clone() - o.num.clone() * self.den.clone();
        reduce_sqrt(&diff, v, q).is_zero()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            n
        } else {
            format!("({n})/({})", self.den.fmt_with(names))
        }
    }
}

/// Reduces a polynomial modulo `x_v^2 - q`.
pub fn reduce_sqrt(p: &MPoly, v: usize, q: &Rational) -> MPoly {
    let coeffs = p.as_univariate(v);
    let nv = p.nvars();
    let x = MPoly::var(nv, v);
    let mut out = MPoly::zero(nv);
    let mut qpow = Rational::one();
    for (k, c) in coeffs.iter().enumerate() {
        if k >= 2 && k % 2 == 0 {
            qpow *= q;
        }
        let t = c.scale(&qpow);
        out = out + if k % 2 == 1 { t * x.clone() } else { t };
    }
    out
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, o: RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::normalize(self.num + o.num, self.den);
        }
        RatFun::normalize(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -self.num, den: self.den }
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, o: RatFun) -> RatFun {
        self + (-o)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, o: RatFun) -> RatFun {
        RatFun::normalize(self.num * o.num, self.den * o.den)
    }
}

impl Ring for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::int(self.nvars(), 0)
    }
    fn one_like(&self) -> Self {
        RatFun::int(self.nvars(), 1)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for RatFun {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn x(i: usize) -> RatFun {
        RatFun::var(2, i)
    }

    fn c(n: i64) -> RatFun {
        RatFun::int(2, n)
    }

    #[test]
    fn cancels_common_factor() {
        let r = (x(0) * x(0) - c(1)).try_div(&(x(0) - c(1))).unwrap();
        assert_eq!(r, x(0) + c(1));
        // (aX - a b X^2) / X = a (1 - b X) with X = x1 and a = b = x0
        let r = (x(0) * x(1) - x(0) * x(0) * x(1) * x(1)).try_div(&x(1)).unwrap();
        assert_eq!(r, x(0) * (c(1) - x(0) * x(1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(c(1).try_div(&c(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn sqrt_reduction() {
        // s^3 = 5 s when s^2 = 5
        let s = x(1);
        let lhs = s.clone() * s.clone() * s.clone();
        let rhs = c(5) * s;
        assert!(lhs.eq_mod_sqrt(&rhs, 1, &rat(5, 1)));
        assert!(!lhs.eq_mod_sqrt(&c(5), 1, &rat(5, 1)));
    }

    #[test]
    fn substitution() {
        let r = c(1).try_div(&(c(1) - x(0))).unwrap();
        let s = r.subs(0, &x(1).try_div(&c(2)).unwrap()).unwrap();
        assert_eq!(s, c(2).try_div(&(c(2) - x(1))).unwrap());
    }
}
