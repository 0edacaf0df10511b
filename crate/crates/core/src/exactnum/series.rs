use super::{Field, Ring};
use crate::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Power series in `T` truncated at `O(T^len)`.
#[derive(Clone, Debug)]
pub struct PowerSeries<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> PowerSeries<R> {
    /// Coefficients `c_0 .. c_{len-1}`; the length is the `T`-adic precision.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "power series needs positive precision");
        PowerSeries { coeffs }
    }

    pub fn constant(c: R, len: usize) -> Self {
        let mut v = vec![c.zero_like(); len];
        v[0] = c;
        PowerSeries::new(v)
    }

    /// `T` itself (requires `len >= 2` to be nonzero).
    pub fn var(one: &R, len: usize) -> Self {
        let mut v = vec![one.zero_like(); len];
        if len > 1 {
            v[1] = one.clone();
        }
        PowerSeries::new(v)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn truncate(&self, len: usize) -> Self {
        PowerSeries::new(self.coeffs[..len.min(self.len()).max(1)].to_vec())
    }

    pub fn scale(&self, c: &R) -> Self {
        PowerSeries::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> PowerSeries<S> {
        PowerSeries::new(self.coeffs.iter().map(f).collect())
    }

    /// Evaluates the truncated polynomial at `x`.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.coeffs[0].zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// `T`-adic valuation, `None` if zero to precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_elem())
    }

    /// `self / T^k`, assuming the first `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs[..k.min(self.len())].iter().any(|c| !c.is_zero_elem()) {
            return Err(Error::Precondition("series not divisible by T^k".into()));
        }
        if k >= self.len() {
            return Err(Error::Precision("no coefficients left after division by T".into()));
        }
        Ok(PowerSeries::new(self.coeffs[k..].to_vec()))
    }

    /// `T^k * self`, keeping the length.
    pub fn shift_up(&self, k: usize) -> Self {
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; k.min(self.len())];
        v.extend(self.coeffs.iter().take(self.len().saturating_sub(k)).cloned());
        PowerSeries::new(v)
    }

    /// Composition `self(g)` with `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero_elem() {
            return Err(Error::Precondition("inner series must have zero constant term".into()));
        }
        let len = self.len().min(g.len());
        let g = g.truncate(len);
        let mut acc = PowerSeries::constant(self.coeffs[0].zero_like(), len);
        for c in self.coeffs[..len].iter().rev() {
            acc = acc * g.clone() + PowerSeries::constant(c.clone(), len);
        }
        Ok(acc)
    }
}

impl<R: Field> PowerSeries<R> {
    pub fn invert(&self) -> Result<Self> {
        let c0inv = self.coeffs[0].try_inv()?;
        let n = self.len();
        let mut out: Vec<R> = Vec::with_capacity(n);
        out.push(c0inv.clone());
        for k in 1..n {
            let mut s = self.coeffs[0].zero_like();
            for j in 1..=k {
                s = s + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(s * c0inv.clone()));
        }
        Ok(PowerSeries::new(out))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.clone() * o.invert()?)
    }
}

impl<R: Ring> PartialEq for PowerSeries<R> {
    /// Equality up to the common precision.
    fn eq(&self, o: &Self) -> bool {
        let n = self.len().min(o.len());
        (0..n).all(|i| self.coeffs[i] == o.coeffs[i])
    }
}

impl<R: Ring> Add for PowerSeries<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.len().min(o.len());
        PowerSeries::new((0..n).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect())
    }
}

impl<R: Ring> Sub for PowerSeries<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.len().min(o.len());
        PowerSeries::new((0..n).map(|i| self.coeffs[i].clone() - o.coeffs[i].clone()).collect())
    }
}

impl<R: Ring> Neg for PowerSeries<R> {
    type Output = Self;
    fn neg(self) -> Self {
        PowerSeries::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Mul for PowerSeries<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let n = self.len().min(o.len());
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero_elem() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] = out[i + j].clone() + self.coeffs[i].clone() * o.coeffs[j].clone();
            }
        }
        PowerSeries::new(out)
    }
}

impl<R: Ring> Ring for PowerSeries<R> {
    fn zero_like(&self) -> Self {
        PowerSeries::constant(self.coeffs[0].zero_like(), self.len())
    }
    fn one_like(&self) -> Self {
        PowerSeries::constant(self.coeffs[0].one_like(), self.len())
    }
    fn is_zero_elem(&self) -> bool {
        self.order().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rational};

    fn s(v: &[i64]) -> PowerSeries<Rational> {
        PowerSeries::new(v.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn geometric_inverse() {
        let inv = s(&[1, -1, 0, 0, 0]).invert().unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1]));
        assert_eq!(inv * s(&[1, -1, 0, 0, 0]), s(&[1, 0, 0, 0, 0]));
    }

    #[test]
    fn shifts_and_compose() {
        let t = s(&[0, 2, 3, 0]);
        assert_eq!(t.shift_down(1).unwrap(), s(&[2, 3, 0]));
        assert_eq!(s(&[1, 1, 1]).shift_up(1), s(&[0, 1, 1]));
        // (1 + X)^2 composed with X = 2T gives 1 + 4T + 4T^2
        let f = s(&[1, 2, 1, 0]);
        assert_eq!(f.compose(&s(&[0, 2, 0, 0])).unwrap(), s(&[1, 4, 4, 0]));
    }
}
