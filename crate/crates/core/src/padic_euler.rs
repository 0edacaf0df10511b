//! Stabilized Satake parameters along a family stub, the interpolation Euler
//! factor `E_p`, its split into flat and depleted brackets, trivial-zero
//! detection and the archimedean normalization constant.

use crate::eigendata::{FamilyStub, StubRow};
use crate::exactnum::{hensel_unit_root, Padic, RatFun, Rational, Ring};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;
use std::ops::Mul;

/// Roots of the Hecke polynomials at the two primes above `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizedParams {
    pub p: u64,
    pub m: u32,
    pub k: u32,
    pub alpha1: Padic,
    pub beta1: Padic,
    pub alpha2: Padic,
    pub beta2: Padic,
    /// Both Hecke polynomials agree as exact field elements.
    pub same_polynomial: bool,
}

/// Square root of `x` in `Q_p` to precision `n`, if one exists.
pub fn padic_sqrt(x: &Padic, n: i64) -> Result<Option<Padic>> {
    let p = x.p();
    let Some(v) = x.valuation() else {
        return Ok(Some(Padic::zero(p, n / 2)));
    };
    if v % 2 != 0 {
        return Ok(None);
    }
    let u = x.mul_p_pow(-v);
    let r = u.residue().expect("unit");
    let r0 = (0..p).find(|&t| ((BigInt::from(t) * t - &r) % p).is_zero());
    let Some(r0) = r0 else {
        return Ok(None);
    };
    let prec = u.precision();
    let mut t = Padic::from_int(p, prec, r0);
    let two = Padic::from_int(p, prec, 2);
    for _ in 0..(64 - (prec.max(1) as u64).leading_zeros()) + 1 {
        t = (t.clone() + u.try_div(&t)?).try_div(&two)?;
    }
    Ok(Some(t.mul_p_pow(v / 2).reduce(n)))
}

fn roots_at_second(a: &Padic, b: &Padic, n: i64) -> Result<(Padic, Padic)> {
    if a.is_unit() {
        let alpha = hensel_unit_root(a, b, n)?;
        let beta = b.try_div(&alpha)?.reduce(n);
        return Ok((alpha, beta));
    }
    let p = a.p();
    let disc = a.clone() * a.clone() - Padic::from_int(p, n + 4, 4) * b.clone();
    let Some(s) = padic_sqrt(&disc, n + 2)? else {
        return Err(Error::Unsupported(format!("Hecke polynomial at the second prime above {p} has no roots in Q_{p}")));
    };
    if s.is_zero() {
        return Err(Error::Precision(format!("repeated root at the second prime above {p}; raise the precision")));
    }
    let two = Padic::from_int(p, n + 4, 2);
    let r1 = (a.clone() + s.clone()).try_div(&two)?.reduce(n);
    let r2 = (a.clone() - s).try_div(&two)?.reduce(n);
    Ok(if r1.digits() <= r2.digits() { (r1, r2) } else { (r2, r1) })
}

/// Satake parameters of row `m`: `alpha1` is the unit root of
/// `X^2 - a_p1 X + c1 p^(k+2m-1)`, `(alpha2, beta2)` the roots of
/// `X^2 - a_p2 X + c2 p^(k-1)`.
pub fn stabilize(stub: &FamilyStub, row: &StubRow, n: i64) -> Result<StabilizedParams> {
    let p = stub.p;
    let k1 = stub.k + 2 * row.m;
    let k2 = stub.k;
    if k2 < 2 {
        return Err(Error::Precondition(format!("weight {k2} < 2")));
    }
    let work = n + 4;
    let a1 = stub.embed(&row.ap1, work)?;
    let a2 = stub.embed(&row.ap2, work)?;
    let b1 = stub.embed(&row.central1, work)?.mul_p_pow(k1 as i64 - 1);
    let b2 = stub.embed(&row.central2, work)?.mul_p_pow(k2 as i64 - 1);
    if !a1.is_unit() {
        return Err(Error::NotOrdinary(format!("a_p1 = {} at m = {} is not a {p}-adic unit", row.ap1, row.m)));
    }
    let alpha1 = hensel_unit_root(&a1, &b1, n)?;
    let beta1 = b1.try_div(&alpha1)?.reduce(n);
    let (alpha2, beta2) = roots_at_second(&a2, &b2, n)?;
    let same_polynomial = k1 == k2 && row.ap1 == row.ap2 && row.central1 == row.central2;
    Ok(StabilizedParams { p, m: row.m, k: stub.k, alpha1, beta1, alpha2, beta2, same_polynomial })
}

/// `(depleted, flat)` brackets:
/// `(1 - alpha2/alpha1)(1 - beta2/alpha1)` and
/// `(1 - p^(2m-1) alpha2/alpha1)(1 - p^(2m-1) beta2/alpha1)`.
pub fn bracket_split(s: &StabilizedParams) -> Result<Brackets> {
    let one = s.alpha1.one_like();
    let x = s.alpha2.try_div(&s.alpha1)?;
    let y = s.beta2.try_div(&s.alpha1)?;
    let e = 2 * s.m as i64 - 1;
    let depleted = (one.clone() - x.clone()) * (one.clone() - y.clone());
    let flat = (one.clone() - x.mul_p_pow(e)) * (one - y.mul_p_pow(e));
    Ok(Brackets { flat, depleted })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Brackets {
    pub flat: Padic,
    pub depleted: Padic,
}

/// The four-term Euler factor, computed directly.
pub fn euler_ep(s: &StabilizedParams) -> Result<Padic> {
    let one = s.alpha1.one_like();
    let e = 2 * s.m as i64 - 1;
    let mut acc = one.clone();
    for r in [&s.alpha2, &s.beta2] {
        let x = r.try_div(&s.alpha1)?;
        acc = acc * (one.clone() - x.clone()) * (one.clone() - x.mul_p_pow(e));
    }
    Ok(acc)
}

/// In the variables `(a1, a2, b2, P)` with `P = p^(2m-1)`: the four-term
/// factor, the flat bracket and the depleted bracket.
pub fn symbolic_brackets() -> (RatFun, RatFun, RatFun) {
    let v = |i| RatFun::var(4, i);
    let one = RatFun::int(4, 1);
    let (a1, a2, b2, pp) = (v(0), v(1), v(2), v(3));
    let x = a2.try_div(&a1).expect("a1 != 0");
    let y = b2.try_div(&a1).expect("a1 != 0");
    let depleted = (one.clone() - x.clone()) * (one.clone() - y.clone());
    let flat = (one.clone() - pp.clone() * x.clone()) * (one.clone() - pp.clone() * y.clone());
    let ep = (one.clone() - x.clone()) * (one.clone() - y.clone()) * (one.clone() - pp.clone() * x) * (one - pp * y);
    (ep, flat, depleted)
}

/// Checks `E_p / flat = depleted` as rational functions.
pub fn symbolic_identity_holds() -> bool {
    let (ep, flat, depleted) = symbolic_brackets();
    match ep.try_div(&flat) {
        Ok(q) => q == depleted && !flat.is_zero(),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TrivialZeroReport {
    pub label: String,
    pub p: u64,
    pub structural_zero: bool,
    /// `None` for an exact (structural) zero.
    pub valuation: Option<i64>,
    pub precision: i64,
    pub depleted: String,
    pub forced_vanishing: bool,
    pub verdict: String,
}

/// Valuation of the depleted bracket at `m = 0`.
pub fn trivial_zero_detect(stub: &FamilyStub, n: i64) -> Result<TrivialZeroReport> {
    let row = stub.row(0).ok_or_else(|| Error::Precondition(format!("stub {} has no m = 0 row", stub.label)))?;
    let s = stabilize(stub, row, n)?;
    let b = bracket_split(&s)?;
    let structural = s.same_polynomial;
    let valuation = if structural { None } else { Some(b.depleted.valuation_bound()) };
    let forced = valuation.is_none_or(|v| v > 0);
    let verdict = if forced {
        "forced vanishing of the two-variable function at (0,1)".to_string()
    } else {
        "depleted bracket is a unit; no forced vanishing".to_string()
    };
    Ok(TrivialZeroReport {
        label: stub.label.clone(),
        p: stub.p,
        structural_zero: structural,
        valuation,
        precision: b.depleted.precision(),
        depleted: if structural { "0".into() } else { b.depleted.to_string() },
        forced_vanishing: forced,
        verdict,
    })
}

/// `rational * pi^pi_power * i^i_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpConstant {
    pub rational: Rational,
    pub pi_power: i64,
    /// Exponent of `i`, reduced mod 4.
    pub i_power: u8,
}

/// `(k-1)! / (2^(k+2m-2) i^(1-k-2m) (-2 pi i)^(k+1))`.
pub fn interp_constant(k: u32, m: u32) -> Result<InterpConstant> {
    if k < 2 {
        return Err(Error::Precondition(format!("weight {k} < 2")));
    }
    let fact: BigInt = (1..k as u64).map(BigInt::from).product();
    let den = BigInt::from(2).pow(k + 2 * m - 2) * BigInt::from(-2).pow(k + 1);
    let i_exp = -(1 - k as i64 - 2 * m as i64) - (k as i64 + 1);
    Ok(InterpConstant {
        rational: Rational::new(fact, den),
        pi_power: -(k as i64 + 1),
        i_power: i_exp.rem_euclid(4) as u8,
    })
}

impl InterpConstant {
    pub fn value(&self) -> num_complex::Complex64 {
        let r = crate::exactnum::rational_to_f64(&self.rational) * std::f64::consts::PI.powi(self.pi_power as i32);
        let i = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][self.i_power as usize];
        num_complex::Complex64::new(r * i.0, r * i.1)
    }
}

impl Mul for InterpConstant {
    type Output = InterpConstant;
    fn mul(self, o: InterpConstant) -> InterpConstant {
        InterpConstant {
            rational: self.rational * o.rational,
            pi_power: self.pi_power + o.pi_power,
            i_power: (self.i_power + o.i_power) % 4,
        }
    }
}

impl fmt::Display for InterpConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * pi^{} * i^{}", self.rational, self.pi_power, self.i_power)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RowReport {
    pub m: u32,
    pub v_alpha1: i64,
    pub flat_part: String,
    pub depleted_part: String,
    pub euler_ep: String,
    pub product_matches: bool,
}

/// Per-row brackets and the check `E_p = flat * depleted` mod `p^(n-c)`.
pub fn row_reports(stub: &FamilyStub, n: i64) -> Result<Vec<RowReport>> {
    stub.rows
        .iter()
        .map(|row| {
            let s = stabilize(stub, row, n)?;
            let b = bracket_split(&s)?;
            let ep = euler_ep(&s)?;
            let prod = b.flat.clone() * b.depleted.clone();
            Ok(RowReport {
                m: row.m,
                v_alpha1: s.alpha1.valuation_bound(),
                flat_part: b.flat.to_string(),
                depleted_part: b.depleted.to_string(),
                euler_ep: ep.to_string(),
                product_matches: prod == ep,
            })
        })
        .collect()
}
