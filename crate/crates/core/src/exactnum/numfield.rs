use super::{rat_int, rational_to_f64, Field, Poly, Rational, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// A number field `Q[x]/(f)` presented by a monic integer polynomial `f`
/// (ascending coefficients). Irreducibility is the caller's responsibility.
#[derive(Debug)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    roots: Vec<Complex64>,
}

impl NumberField {
    pub fn new(min_poly: Vec<BigInt>) -> Result<Arc<NumberField>> {
        if min_poly.len() < 2 {
            return Err(Error::Schema("minimal polynomial must have degree >= 1".into()));
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(Error::Schema("minimal polynomial must be monic".into()));
        }
        let roots = complex_roots(&min_poly);
        Ok(Arc::new(NumberField { min_poly, roots }))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Arc<NumberField>> {
        NumberField::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn rationals() -> Arc<NumberField> {
        NumberField::from_i64(&[0, 1]).unwrap()
    }

    /// The cyclotomic field of `n`-th roots of unity, generated by `zeta_n`.
    pub fn cyclotomic(n: u64) -> Arc<NumberField> {
        NumberField::new(cyclotomic_poly(n)).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// Complex roots of the minimal polynomial, sorted by (re, im); the
    /// embedding with index `i` sends the generator to `roots()[i]`.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        (self.degree() == 1 && other.degree() == 1) || self.min_poly == other.min_poly
    }

    fn modulus(&self) -> Poly<Rational> {
        Poly::new(self.min_poly.iter().map(|c| rat_int(c.clone())).collect())
    }
}

pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let q = |v: Vec<i64>| Poly::new(v.into_iter().map(|c| rat_int(c)).collect::<Vec<Rational>>());
    let mut xn = vec![0i64; n as usize + 1];
    xn[0] = -1;
    xn[n as usize] = 1;
    let mut f = q(xn);
    for d in 1..n {
        if n % d == 0 {
            let phi = q(cyclotomic_poly(d).iter().map(|c| i64::try_from(c).unwrap()).collect());
            f = f.div_rem(&phi).unwrap().0;
        }
    }
    f.coeffs().iter().map(|c| c.to_integer()).collect()
}

fn complex_roots(coeffs: &[BigInt]) -> Vec<Complex64> {
    use num_traits::ToPrimitive;
    let c: Vec<f64> = coeffs.iter().map(|x| x.to_f64().unwrap()).collect();
    let n = c.len() - 1;
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    // Durand–Kerner
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        if r.im.abs() < 1e-12 {
            r.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    z
}

/// Element of a number field, stored by its coordinates on the power basis.
#[derive(Clone)]
pub struct NumberFieldElem {
    coords: Vec<Rational>,
    field: Arc<NumberField>,
}

impl NumberFieldElem {
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() > field.degree() {
            return Err(Error::Schema(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                field.degree()
            )));
        }
        let mut coords = coords;
        coords.resize(field.degree(), Rational::zero());
        Ok(NumberFieldElem { coords, field: field.clone() })
    }

    pub fn from_rational(field: &Arc<NumberField>, r: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = r;
        NumberFieldElem { coords, field: field.clone() }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, rat_int(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The class of `x^k`.
    pub fn gen_pow(field: &Arc<NumberField>, k: u64) -> Self {
        let x = if field.degree() == 1 {
            NumberFieldElem::from_rational(field, -rat_int(field.min_poly[0].clone()))
        } else {
            let mut c = vec![Rational::zero(); field.degree()];
            c[1] = Rational::one();
            NumberFieldElem { coords: c, field: field.clone() }
        };
        x.pow(k)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Moves the element into `target`: always possible for rationals or when
    /// the presentations agree.
    pub fn coerce_into(&self, target: &Arc<NumberField>) -> Result<Self> {
        if self.field.same_as(target) {
            return Ok(NumberFieldElem { coords: self.coords.clone(), field: target.clone() });
        }
        match self.as_rational() {
            Some(r) => Ok(NumberFieldElem::from_rational(target, r)),
            None => Err(Error::FieldMismatch(format!(
                "cannot move {self} into field with minimal polynomial {:?}",
                target.min_poly
            ))),
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field.same_as(&o.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field.min_poly, o.field.min_poly)))
        }
    }

    fn as_poly(&self) -> Poly<Rational> {
        Poly::new(self.coords.clone())
    }

    fn from_poly(field: &Arc<NumberField>, p: Poly<Rational>) -> Self {
        let r = if p.degree() >= field.degree() { p.div_rem(&field.modulus()).unwrap().1 } else { p };
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), Rational::zero());
        NumberFieldElem { coords, field: field.clone() }
    }

    /// Brings a rational-field operand into the other operand's field.
    fn unify(&self, o: &Self) -> Option<(Self, Self)> {
        if self.field.degree() == 1 && o.field.degree() > 1 {
            Some((self.coerce_into(&o.field).ok()?, o.clone()))
        } else if o.field.degree() == 1 && self.field.degree() > 1 {
            Some((self.clone(), o.coerce_into(&self.field).ok()?))
        } else {
            None
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if let Some((a, b)) = self.unify(o) {
            return a.try_add(&b);
        }
        self.check(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        Ok(NumberFieldElem { coords, field: self.field.clone() })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o.clone())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if let Some((a, b)) = self.unify(o) {
            return a.try_mul(&b);
        }
        self.check(o)?;
        Ok(Self::from_poly(&self.field, self.as_poly() * o.as_poly()))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = Poly::ext_gcd(&self.as_poly(), &self.field.modulus())?;
        if g.degree() != 0 {
            return Err(Error::Precondition("minimal polynomial is reducible".into()));
        }
        Ok(Self::from_poly(&self.field, s))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        NumberFieldElem { coords: self.coords.iter().map(|c| c * r).collect(), field: self.field.clone() }
    }

    /// Image under the complex embedding with the given index.
    pub fn embed(&self, index: usize) -> Complex64 {
        let z = self.field.roots[index];
        if self.field.degree() == 1 {
            return Complex64::new(rational_to_f64(&self.coords[0]), 0.0);
        }
        self.coords
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rational_to_f64(c))
    }

    pub fn num_embeddings(&self) -> usize {
        self.field.degree()
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl PartialEq for NumberFieldElem {
    fn eq(&self, o: &Self) -> bool {
        if let Some((a, b)) = self.unify(o) {
            return a == b;
        }
        self.field.same_as(&o.field) && self.coords == o.coords
    }
}

impl fmt::Debug for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "z")?,
                1 => write!(f, "{a}*z")?,
                _ if a.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for NumberFieldElem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.try_add(&o).expect("number field mismatch")
    }
}

impl Sub for NumberFieldElem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.try_sub(&o).expect("number field mismatch")
    }
}

impl Mul for NumberFieldElem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.try_mul(&o).expect("number field mismatch")
    }
}

impl Neg for NumberFieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        NumberFieldElem { coords: self.coords.into_iter().map(|c| -c).collect(), field: self.field }
    }
}

impl Ring for NumberFieldElem {
    fn zero_like(&self) -> Self {
        NumberFieldElem::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        NumberFieldElem::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for NumberFieldElem {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn cyclotomic_polys() {
        let c = |n| cyclotomic_poly(n).iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(c(1), vec![-1, 1]);
        assert_eq!(c(3), vec![1, 1, 1]);
        assert_eq!(c(4), vec![1, 0, 1]);
        assert_eq!(c(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn identity_and_reduction() {
        let k = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        let x = NumberFieldElem::gen_pow(&k, 1);
        assert_eq!(x.clone() + NumberFieldElem::zero(&k), x);
        assert_eq!(x.clone() * x.clone(), NumberFieldElem::from_int(&k, 5));
    }

    #[test]
    fn zeta3_product() {
        let k = NumberField::cyclotomic(3);
        let z = NumberFieldElem::gen_pow(&k, 1);
        let z2 = NumberFieldElem::gen_pow(&k, 2);
        assert_eq!(z * z2, NumberFieldElem::one(&k));
    }

    #[test]
    fn inverse_and_errors() {
        let k = NumberField::from_i64(&[1, 1, 1]).unwrap();
        let a = NumberFieldElem::new(&k, vec![rat(2, 1), rat(3, 7)]).unwrap();
        assert_eq!(a.clone() * a.inv().unwrap(), NumberFieldElem::one(&k));
        assert_eq!(NumberFieldElem::zero(&k).inv(), Err(Error::DivisionByZero));
        let other = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let b = NumberFieldElem::gen_pow(&other, 1);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn embeddings_of_gaussian_integers() {
        let k = NumberField::cyclotomic(4);
        let i = NumberFieldElem::gen_pow(&k, 1);
        let r = k.roots();
        assert!((r[0].im + 1.0).abs() < 1e-12 && (r[1].im - 1.0).abs() < 1e-12);
        assert!((i.embed(1) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }
}
