//! Dirichlet characters with exact cyclotomic values and the quadratic
//! character of a real quadratic field.

use crate::exactnum::{factorize, gcd_u64, lcm_u64, NumberField, NumberFieldElem};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// One cyclic factor of `(Z/M)^x`: a generator (CRT-lifted to `M`), its
/// order, and the prime power it lives on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
    pub prime_power: u64,
    local_gen: u64,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = mulmod(x, a, m);
        k += 1;
    }
    k
}

fn primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let phi = pe / p * (p - 1);
    (2..pe).find(|&g| g % p != 0 && mult_order(g, pe) == phi).expect("odd prime powers are cyclic")
}

/// `x` with `x = a mod m1`, `x = 1 mod m2` (coprime moduli).
fn crt_one(a: u64, m1: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    (0..m).step_by(m2 as usize).map(|k| k + 1).find(|x| x % m1 == a % m1).unwrap_or(1) % m.max(1)
}

/// Generators of `(Z/M)^x`, one per cyclic factor, in a fixed order: odd
/// primes ascending, then `-1` and `5` for the 2-part.
pub fn unit_group_generators(m: u64) -> Vec<CyclicFactor> {
    let mut out = vec![];
    let fac = factorize(m);
    for &(p, e) in &fac {
        let pe = p.pow(e);
        let rest = m / pe;
        if p == 2 {
            if e >= 2 {
                out.push(CyclicFactor { generator: crt_one(pe - 1, pe, rest), order: 2, prime_power: pe, local_gen: pe - 1 });
            }
            if e >= 3 {
                out.push(CyclicFactor { generator: crt_one(5, pe, rest), order: pe / 4, prime_power: pe, local_gen: 5 });
            }
        } else {
            let g = primitive_root(p, e);
            out.push(CyclicFactor { generator: crt_one(g, pe, rest), order: pe / p * (p - 1), prime_power: pe, local_gen: g });
        }
    }
    out.sort_by_key(|f| f.prime_power % 2 == 0);
    out
}

/// Discrete logarithms of `a` with respect to the generators.
fn dlogs(a: u64, gens: &[CyclicFactor]) -> Vec<u64> {
    let mut out = vec![];
    let mut i = 0;
    while i < gens.len() {
        let f = &gens[i];
        let pe = f.prime_power;
        let x = a % pe;
        if pe % 2 == 1 {
            out.push((0..f.order).find(|&k| powmod(f.local_gen, k, pe) == x).expect("unit"));
            i += 1;
        } else if pe == 4 {
            out.push(if x == 1 { 0 } else { 1 });
            i += 1;
        } else {
            // x = (-1)^s 5^t mod 2^e
            let s = if x % 4 == 1 { 0 } else { 1 };
            let y = if s == 0 { x } else { pe - x };
            let t = (0..pe / 4).find(|&k| powmod(5, k, pe) == y).expect("unit");
            out.push(s);
            out.push(t);
            i += 2;
        }
    }
    out
}

/// Dirichlet character modulo `M`, stored by the exponents `j_i` with
/// `chi(g_i) = exp(2 pi i j_i / ord(g_i))`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
    gens: Vec<CyclicFactor>,
    field: Arc<NumberField>,
}

#[derive(Serialize, Deserialize)]
pub struct CharacterRepr {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Schema("character modulus must be positive".into()));
        }
        let gens = unit_group_generators(modulus);
        if exponents.len() != gens.len() {
            return Err(Error::Schema(format!(
                "modulus {modulus} has {} generators, got {} exponents",
                gens.len(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.iter().zip(&gens).map(|(j, g)| j % g.order).collect();
        let order = exponents.iter().zip(&gens).fold(1, |acc, (j, g)| lcm_u64(acc, g.order / gcd_u64(*j, g.order)));
        Ok(DirichletCharacter { modulus, exponents, order, gens, field: NumberField::cyclotomic(order) })
    }

    pub fn trivial(modulus: u64) -> Self {
        let n = unit_group_generators(modulus).len();
        DirichletCharacter::new(modulus, vec![0; n]).expect("trivial character")
    }

    pub fn from_repr(r: &CharacterRepr) -> Result<Self> {
        let c = DirichletCharacter::new(r.modulus, r.exponents.clone())?;
        if let Some(o) = r.order {
            if o != c.order {
                return Err(Error::Schema(format!("declared order {o} but exponents give {}", c.order)));
            }
        }
        Ok(c)
    }

    pub fn repr(&self) -> CharacterRepr {
        CharacterRepr { modulus: self.modulus, exponents: self.exponents.clone(), order: Some(self.order) }
    }

    /// Character with prescribed values `chi(g_i) = zeta_{ord_i}^{j_i}` given as
    /// a closure returning the exponent of `zeta_n` at each generator.
    fn from_generator_values(modulus: u64, f: impl Fn(u64) -> Option<(u64, u64)>) -> Self {
        let gens = unit_group_generators(modulus);
        let exps = gens
            .iter()
            .map(|g| {
                let (k, n) = f(g.generator).expect("generator is a unit");
                // zeta_n^k = zeta_{ord}^{j}
                (k * g.order / n) % g.order
            })
            .collect();
        DirichletCharacter::new(modulus, exps).expect("consistent exponents")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn generators(&self) -> &[CyclicFactor] {
        &self.gens
    }

    /// The cyclotomic field of order `n` holding the values.
    pub fn value_field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `chi(a) = zeta_n^k`: returns `Some(k mod n)`, or `None` off the units.
    pub fn value_exponent(&self, a: i64) -> Option<u64> {
        let m = self.modulus;
        let a = a.rem_euclid(m as i64) as u64;
        if gcd_u64(a, m) != 1 {
            return None;
        }
        if m == 1 {
            return Some(0);
        }
        Some(self.normalize_exp(&dlogs(a, &self.gens)))
    }

    fn normalize_exp(&self, logs: &[u64]) -> u64 {
        let n = self.order;
        let mut k = 0u64;
        for ((l, j), g) in logs.iter().zip(&self.exponents).zip(&self.gens) {
            // every j/ord_i has denominator dividing n
            let t = (l * j) % g.order;
            let num = t * n;
            debug_assert_eq!(num % g.order, 0);
            k = (k + num / g.order) % n;
        }
        k
    }

    /// Exact value in the cyclotomic field of order `n`; zero off the units.
    pub fn eval(&self, a: i64) -> NumberFieldElem {
        match self.value_exponent(a) {
            None => NumberFieldElem::zero(&self.field),
            Some(k) => NumberFieldElem::gen_pow(&self.field, k),
        }
    }

    pub fn eval_complex(&self, a: i64) -> Complex64 {
        match self.value_exponent(a) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.order as f64),
        }
    }

    /// The same character viewed modulo a multiple `m2` of the modulus.
    pub fn lift_to(&self, m2: u64) -> Result<Self> {
        if m2 % self.modulus != 0 {
            return Err(Error::Precondition(format!("{m2} is not a multiple of {}", self.modulus)));
        }
        Ok(DirichletCharacter::from_generator_values(m2, |g| {
            self.value_exponent(g as i64).map(|k| (k, self.order))
        }))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = lcm_u64(self.modulus, o.modulus);
        let a = self.lift_to(m).expect("lcm");
        let b = o.lift_to(m).expect("lcm");
        let exps = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
        DirichletCharacter::new(m, exps).expect("same generators")
    }

    pub fn pow(&self, e: i64) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(&self.gens)
            .map(|(j, g)| ((*j as i128 * e as i128).rem_euclid(g.order as i128)) as u64)
            .collect();
        DirichletCharacter::new(self.modulus, exps).expect("same generators")
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Smallest modulus through which the character factors.
    pub fn conductor(&self) -> u64 {
        let m = self.modulus;
        let mut divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        divisors.sort();
        for d in divisors {
            let ok = (1..m)
                .filter(|&a| gcd_u64(a, m) == 1 && a % d == 1 % d)
                .all(|a| self.value_exponent(a as i64) == Some(0));
            if ok {
                return d;
            }
        }
        m
    }

    /// Equality as functions on the integers coprime to both moduli.
    pub fn same_character(&self, o: &Self) -> bool {
        let m = lcm_u64(self.modulus, o.modulus);
        let a = self.lift_to(m).expect("lcm");
        let b = o.lift_to(m).expect("lcm");
        a.exponents == b.exponents
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, o: &Self) -> bool {
        self.modulus == o.modulus && self.exponents == o.exponents
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(|x| x.to_string()).collect();
        write!(f, "chi[mod {}; exps ({}); order {}]", self.modulus, e.join(","), self.order)
    }
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.repr().serialize(s)
    }
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Kronecker symbol `(d | n)` for a discriminant `d`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut result = 1i64;
    for (p, e) in factorize(n) {
        let s = if p == 2 {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        } else {
            let r = d.rem_euclid(p as i64) as u64;
            if r == 0 {
                0
            } else if powmod(r, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            }
        };
        result *= if e % 2 == 0 && s != 0 { 1 } else { s };
    }
    result
}

/// The quadratic character of `Q(sqrt D)` for a positive fundamental
/// discriminant `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCharacter {
    pub disc: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl QuadCharacter {
    pub fn new(disc: u64) -> Result<Self> {
        let ok = match disc % 4 {
            1 => disc > 1 && is_squarefree(disc),
            0 => {
                let m = disc / 4;
                (m % 4 == 2 || m % 4 == 3) && is_squarefree(m)
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Precondition(format!("{disc} is not a positive fundamental discriminant")));
        }
        Ok(QuadCharacter { disc })
    }

    pub fn eval(&self, n: u64) -> i64 {
        kronecker(self.disc as i64, n)
    }

    pub fn split_type(&self, l: u64) -> SplitType {
        match self.eval(l) {
            1 => SplitType::Split,
            -1 => SplitType::Inert,
            _ => SplitType::Ramified,
        }
    }

    pub fn as_dirichlet(&self) -> DirichletCharacter {
        DirichletCharacter::from_generator_values(self.disc, |g| match kronecker(self.disc as i64, g) {
            1 => Some((0, 2)),
            -1 => Some((1, 2)),
            _ => None,
        })
    }
}

/// `chi^2 * omega` trivial, the distinction condition on characters.
pub fn distinguished_compatible(chi: &DirichletCharacter, omega_restricted: &DirichletCharacter) -> bool {
    chi.pow(2).mul(omega_restricted).is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Ring};

    #[test]
    fn generators_small_moduli() {
        let g = unit_group_generators(5);
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].generator, g[0].order), (2, 4));
        let g = unit_group_generators(16);
        assert_eq!(g.iter().map(|f| (f.generator, f.order)).collect::<Vec<_>>(), vec![(15, 2), (5, 4)]);
        assert!(unit_group_generators(2).is_empty());
    }

    #[test]
    fn mod_four_and_mod_five() {
        let chi4 = DirichletCharacter::new(4, vec![1]).unwrap();
        assert_eq!(chi4.eval(3).as_rational(), Some(rat(-1, 1)));
        let psi = DirichletCharacter::new(5, vec![1]).unwrap();
        assert_eq!(psi.order(), 4);
        let v = psi.eval(2);
        assert_eq!(v.pow(2).as_rational(), Some(rat(-1, 1)));
        assert!(psi.eval(10).is_zero());
    }

    #[test]
    fn products_and_conductor() {
        let psi = DirichletCharacter::new(5, vec![1]).unwrap();
        let eta = QuadCharacter::new(5).unwrap().as_dirichlet();
        assert!(psi.pow(2).same_character(&eta));
        let chi = DirichletCharacter::new(4, vec![1]).unwrap().mul(&DirichletCharacter::trivial(3));
        assert_eq!(chi.modulus(), 12);
        assert_eq!(chi.conductor(), 4);
    }

    #[test]
    fn kronecker_values() {
        let eta = QuadCharacter::new(5).unwrap();
        assert_eq!((eta.eval(5), eta.eval(2), eta.eval(11)), (0, -1, 1));
        assert!(QuadCharacter::new(20).is_err());
        assert!(QuadCharacter::new(8).is_ok());
    }

    #[test]
    fn compatibility_examples() {
        let t = DirichletCharacter::trivial(1);
        assert!(distinguished_compatible(&t, &t));
        assert!(distinguished_compatible(&DirichletCharacter::new(4, vec![1]).unwrap(), &t));
        assert!(!distinguished_compatible(&DirichletCharacter::new(5, vec![1]).unwrap(), &t));
    }
}
