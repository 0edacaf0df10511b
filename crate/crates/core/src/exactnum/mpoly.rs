use super::{Rational, Ring};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector; compared lexicographically (variable 0 most significant).
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over the rationals in a fixed number of
/// indexed variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        MPoly::term(nvars, Rational::one(), &[(i, 1)])
    }

    /// `c * prod x_i^e_i`
    pub fn term(nvars: usize, c: Rational, powers: &[(usize, u32)]) -> Self {
        let mut m = vec![0; nvars];
        for &(i, e) in powers {
            m[i] += e;
        }
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Coefficients of `self` as a polynomial in `x_v`, lowest degree first.
    pub fn as_univariate(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let k = m2[v] as usize;
            m2[v] = 0;
            out[k].terms.insert(m2, c.clone());
        }
        out
    }

    pub fn from_univariate(v: usize, coeffs: &[MPoly]) -> Self {
        let nvars = coeffs[0].nvars;
        let mut out = MPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2[v] += k as u32;
                out.add_term(m2, a.clone());
            }
        }
        out
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = r.leading() {
            if rm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let m: Monomial = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let t = MPoly { nvars: self.nvars, terms: BTreeMap::from([(m.clone(), c.clone())]) };
            r = r - t * d.clone();
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = Rational::one() / c;
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    fn content_in(&self, v: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.as_univariate(v) {
            g = MPoly::gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> MPoly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
        let bc = b.as_univariate(v);
        let n = bc.len() - 1;
        let lc = bc[n].clone();
        let mut r = a.as_univariate(v);
        loop {
            while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            let k = r.len() - 1;
            if k < n || r[k].is_zero() {
                break;
            }
            let t = r[k].clone();
            for c in r.iter_mut() {
                *c = c.clone() * lc.clone();
            }
            for (j, bj) in bc.iter().enumerate() {
                let idx = k - n + j;
                r[idx] = r[idx].clone() - t.clone() * bj.clone();
            }
            if k == 0 {
                break;
            }
        }
        MPoly::from_univariate(v, &r)
    }

    /// Greatest common divisor, normalized to lex-leading coefficient 1.
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        let nv = a.nvars;
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return MPoly::one(nv);
        }
        let Some(v) = (0..nv).rev().find(|&v| a.uses_var(v) || b.uses_var(v)) else {
            return MPoly::one(nv);
        };
        if !a.uses_var(v) {
            return MPoly::gcd(a, &b.content_in(v));
        }
        if !b.uses_var(v) {
            return MPoly::gcd(&a.content_in(v), b);
        }
        let (ca, cb) = (a.content_in(v), b.content_in(v));
        let c = MPoly::gcd(&ca, &cb);
        let mut r0 = a.div_exact(&ca).expect("content divides");
        let mut r1 = b.div_exact(&cb).expect("content divides");
        if r0.degree_in(v) < r1.degree_in(v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        loop {
            let r = MPoly::prem(&r0, &r1, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                r1 = MPoly::one(nv);
                break;
            }
            r0 = r1;
            r1 = r.primitive_in(v);
        }
        (c * r1.primitive_in(v)).monic()
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_v -> value` (a polynomial).
    pub fn subs(&self, v: usize, value: &MPoly) -> MPoly {
        let coeffs = self.as_univariate(v);
        let mut acc = MPoly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = acc * value.clone() + c.clone();
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (m, c) in self.terms.iter().rev() {
            let mut mono = vec![];
            for (i, &e) in m.iter().enumerate() {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                match e {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let s = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono.join("*")
            } else if *c == -Rational::one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{c}*{}", mono.join("*"))
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, o: MPoly) -> MPoly {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, o: MPoly) -> MPoly {
        self + (-o)
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, o: MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.nvars)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn x(i: usize) -> MPoly {
        MPoly::var(3, i)
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(3, rat(n, 1))
    }

    #[test]
    fn exact_division() {
        let a = (x(0) + c(1)) * (x(1) - x(2));
        assert_eq!(a.div_exact(&(x(1) - x(2))).unwrap(), x(0) + c(1));
        assert!(a.div_exact(&(x(0) + c(2))).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let g = x(0) * x(1) - c(2) * x(2);
        let a = g.clone() * (x(0) + x(2)).pow(2);
        let b = g.clone() * (x(1) * x(1) + c(3)) * x(2);
        assert_eq!(MPoly::gcd(&a, &b), g.monic());
        assert_eq!(MPoly::gcd(&(x(0) + c(1)), &(x(0) - c(1))), c(1));
    }

    #[test]
    fn substitution() {
        let p = x(0) * x(0) + x(1);
        assert_eq!(p.subs(0, &(x(2) + c(1))), x(2) * x(2) + c(2) * x(2) + c(1) + x(1));
    }
}
