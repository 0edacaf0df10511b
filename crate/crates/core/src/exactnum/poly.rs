use super::{Field, Ring};
use crate::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense univariate polynomial. Always holds at least one coefficient so the
/// coefficient context (field, prime, precision) is available for the zero
/// polynomial too.
#[derive(Clone, Debug)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// `c * X^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `1 - c X`
    pub fn one_minus(c: R) -> Self {
        Poly::new(vec![c.one_like(), -c])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero_elem()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &R {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.coeffs[0].zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Substitutes `X -> c X`.
    pub fn rescale_var(&self, c: &R) -> Self {
        let mut pw = c.one_like();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        Poly::new(out)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Poly<S>> {
        Ok(Poly::new(self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?))
    }
}

impl<R: Field> Poly<R> {
    /// Euclidean division `self = q * d + r`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead_inv = d.leading().try_inv()?;
        let zero = self.coeffs[0].zero_like();
        let mut r = self.coeffs.clone();
        if self.degree() < d.degree() || self.is_zero() {
            return Ok((Poly::constant(zero), self.clone()));
        }
        let mut q = vec![zero.clone(); self.degree() - d.degree() + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + d.degree()].clone() * lead_inv.clone();
            if !c.is_zero_elem() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(d.degree().max(1));
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn monic(&self) -> Result<Self> {
        let inv = self.leading().try_inv()?;
        Ok(self.scale(&inv))
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic (or zero).
    pub fn ext_gcd(a: &Self, b: &Self) -> Result<(Self, Self, Self)> {
        let zero = a.coeffs[0].zero_like();
        let one = zero.one_like();
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::constant(one.clone()), Poly::constant(zero.clone()));
        let (mut t0, mut t1) = (Poly::constant(zero.clone()), Poly::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s2 = s0 - q.clone() * s1.clone();
            let t2 = t0 - q * t1.clone();
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = r0.leading().try_inv()?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }
}

impl<R: Ring> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero_like(&self) -> Self {
        Poly::constant(self.coeffs[0].zero_like())
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.coeffs[0].one_like())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() && !(self.is_zero() && i == 0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rational};

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn trims_and_compares() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]).degree(), 0);
        assert!(p(&[0]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        // (X^2 - 1) = (X - 1)(X + 1)
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        let (g, s, t) = Poly::ext_gcd(&p(&[-1, 0, 1]), &p(&[1, 2, 1])).unwrap();
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(s * p(&[-1, 0, 1]) + t * p(&[1, 2, 1]), g);
    }

    #[test]
    fn eval_horner() {
        assert_eq!(p(&[1, -3, 2]).eval(&rat(5, 1)), rat(36, 1));
    }
}
