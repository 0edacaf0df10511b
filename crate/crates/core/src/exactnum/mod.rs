//! Exact arithmetic foundation: rationals, number fields, p-adic numbers with
//! absolute precision, dense polynomials, truncated power series and
//! multivariate rational functions.

mod bernoulli;
mod mpoly;
mod numfield;
mod padic;
mod poly;
mod ratfun;
mod series;

pub use bernoulli::{bernoulli, bernoulli_table};
pub use mpoly::{MPoly, Monomial};
pub use numfield::{cyclotomic_poly, NumberField, NumberFieldElem};
pub use padic::{hensel_unit_root, Padic};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use series::PowerSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Commutative ring elements whose zero and one may depend on a context
/// (field presentation, prime and precision) carried by the element itself.
pub trait Ring:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn from_i64_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut base = if n < 0 { -one } else { one };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            k >>= 1;
        }
        acc
    }

    fn pow(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

/// Rings where non-zero elements may be inverted (possibly failing, e.g. on
/// p-adic elements that are zero to working precision).
pub trait Field: Ring {
    fn try_inv(&self) -> crate::Result<Self>;
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Rational {
    fn try_inv(&self) -> crate::Result<Self> {
        if self.is_zero() {
            Err(crate::Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflows f64: scale both down
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let nn = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let dd = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
        nn / dd
    })
}

/// p-adic valuation of a non-zero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational; `None` for zero.
pub fn rat_valuation(r: &Rational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}
