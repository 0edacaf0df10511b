//! Reference eigenforms computed from first principles: the discriminant
//! form, the elliptic curve 11a, level-one cusp forms of small weight and
//! twists.

use crate::characters::DirichletCharacter;
use crate::eigendata::{EllipticEigenPacket, FamilyStub, StubRow};
use crate::exactnum::{primes_up_to, NumberField, NumberFieldElem};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Mutex;

static TAU_CACHE: Mutex<Vec<i128>> = Mutex::new(Vec::new());

/// `tau(0..=n)` from `Delta = q (eta^3)^8` with the sparse series
/// `eta^3 = sum (-1)^j (2j+1) q^{j(j+1)/2}`. Intermediate products wrap in
/// `i128`; the final values fit for `n <= 10^6`.
pub fn tau_table(n: usize) -> Vec<i128> {
    {
        let c = TAU_CACHE.lock().unwrap();
        if c.len() > n {
            return c[..=n].to_vec();
        }
    }
    let m = n; // need coefficients of (eta^3)^8 up to q^{n-1}
    let mut sparse = vec![];
    let mut j = 0i128;
    loop {
        let e = (j * (j + 1) / 2) as usize;
        if e > m {
            break;
        }
        sparse.push((e, if j % 2 == 0 { 2 * j + 1 } else { -(2 * j + 1) }));
        j += 1;
    }
    let mut acc = vec![0i128; m + 1];
    for &(e, c) in &sparse {
        acc[e] = c;
    }
    for _ in 1..8 {
        let mut next = vec![0i128; m + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &sparse {
                if i + e > m {
                    break;
                }
                next[i + e] = next[i + e].wrapping_add(a.wrapping_mul(c));
            }
        }
        acc = next;
    }
    let mut tau = vec![0i128; n + 1];
    tau[1..=n].copy_from_slice(&acc[..n]);
    let mut c = TAU_CACHE.lock().unwrap();
    if c.len() < tau.len() {
        *c = tau.clone();
    }
    tau
}

fn rational_elem(n: impl Into<BigInt>) -> NumberFieldElem {
    NumberFieldElem::from_rational(&NumberField::rationals(), crate::exactnum::rat_int(n))
}

fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut r = 1i64;
    let (mut b, mut e) = (a, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// `a_l` of `y^2 + y = x^3 - x^2 - 10x - 20` (conductor 11).
pub fn ec11a_ap(l: u64) -> i64 {
    if l == 11 {
        return 1;
    }
    let f = |x: i64| x * x * x - x * x - 10 * x - 20;
    if l == 2 {
        let mut count = 1;
        for x in 0..2i64 {
            for y in 0..2i64 {
                if (y * y + y - f(x)).rem_euclid(2) == 0 {
                    count += 1;
                }
            }
        }
        return 3 - count;
    }
    let p = l as i64;
    -(0..p).map(|x| legendre((4 * f(x) + 1).rem_euclid(p), p)).sum::<i64>()
}

pub fn delta_packet(cutoff: u64) -> Result<EllipticEigenPacket> {
    let tau = tau_table(cutoff as usize);
    let ap = primes_up_to(cutoff).into_iter().map(|l| (l, rational_elem(tau[l as usize]))).collect();
    EllipticEigenPacket::new("Delta", 1, 12, DirichletCharacter::trivial(1), NumberField::rationals(), cutoff, ap)
}

pub fn ec11a_packet(cutoff: u64) -> Result<EllipticEigenPacket> {
    let ap = primes_up_to(cutoff).into_iter().map(|l| (l, rational_elem(ec11a_ap(l)))).collect();
    EllipticEigenPacket::new("11a", 11, 2, DirichletCharacter::trivial(11), NumberField::rationals(), cutoff, ap)
}

/// The quartic character mod 5 with `psi(2) = i`; `psi^2` is the quadratic
/// character of `Q(sqrt 5)`.
pub fn psi4() -> DirichletCharacter {
    DirichletCharacter::new(5, vec![1]).expect("mod 5")
}

/// `Delta (x) psi4`: weight 12, level 25, nebentypus the character of `Q(sqrt 5)`.
pub fn delta_twist_packet(cutoff: u64) -> Result<EllipticEigenPacket> {
    delta_packet(cutoff)?.twist(&psi4(), "Delta.psi4")
}

pub fn ec11a_twist_packet(cutoff: u64) -> Result<EllipticEigenPacket> {
    ec11a_packet(cutoff)?.twist(&psi4(), "11a.psi4")
}

fn sigma_series(k: u32, n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let dk = BigInt::from(d).pow(k);
        for m in (d..=n).step_by(d) {
            s[m] += &dk;
        }
    }
    s
}

fn eisenstein(k: u32, n: usize) -> Vec<BigInt> {
    let c: i64 = match k {
        4 => 240,
        6 => -504,
        _ => panic!("only E4 and E6"),
    };
    let mut s = sigma_series(k - 1, n);
    s[0] = BigInt::from(1);
    for x in s.iter_mut().skip(1) {
        *x *= c;
    }
    s
}

fn mul_series(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// q-expansion to `q^n` of the normalized cusp form of level one and weight
/// `k` in {12, 16, 18, 20, 22, 26}, where the cusp space is one-dimensional.
pub fn level_one_cusp_form(k: u32, n: usize) -> Result<Vec<BigInt>> {
    let delta: Vec<BigInt> = tau_table(n).into_iter().map(BigInt::from).collect();
    let e4 = eisenstein(4, n);
    let e6 = eisenstein(6, n);
    Ok(match k {
        12 => delta,
        16 => mul_series(&delta, &e4),
        18 => mul_series(&delta, &e6),
        20 => mul_series(&mul_series(&delta, &e4), &e4),
        22 => mul_series(&mul_series(&delta, &e4), &e6),
        26 => mul_series(&mul_series(&mul_series(&delta, &e4), &e4), &e6),
        _ => return Err(Error::Unsupported(format!("weight {k}: level-one cusp space is not one-dimensional"))),
    })
}

/// Stub for the base change of `pi` at a split prime `p` in weight `k`:
/// row 0 carries `(a_p, a_p)` with equal central values; rows `m` in `ms`
/// use the level-one form of weight `k + 2m` at the first prime (mock family).
pub fn base_change_stub(pi: &EllipticEigenPacket, p: u64, ms: &[u32], embedding: Option<u64>) -> Result<FamilyStub> {
    let a = pi.ap(p)?.clone();
    let w = pi.omega(p as i64)?;
    let mut rows = vec![StubRow { m: 0, ap1: a.clone(), ap2: a.clone(), central1: w.clone(), central2: w.clone() }];
    for &m in ms.iter().filter(|&&m| m > 0) {
        let f = level_one_cusp_form(pi.weight + 2 * m, p as usize)?;
        let twist = pi.ap(p)?.clone();
        let base = delta_packet(p)?.ap(p)?.clone();
        // transport the twist factor of pi relative to Delta, if any
        let factor = if base.is_zero() { NumberFieldElem::one(&pi.field) } else { twist.try_div(&base)? };
        let ap1 = NumberFieldElem::from_rational(&pi.field, crate::exactnum::rat_int(f[p as usize].clone())).try_mul(&factor)?;
        rows.push(StubRow { m, ap1, ap2: a.clone(), central1: w.clone(), central2: w.clone() });
    }
    Ok(FamilyStub {
        label: format!("{}@{p}", pi.label),
        p,
        k: pi.weight,
        field: pi.field.clone(),
        embedding,
        base_change: true,
        rows,
    })
}

fn elem_json(x: &NumberFieldElem) -> Value {
    if let Some(r) = x.as_rational() {
        if r.is_integer() {
            return Value::String(r.numer().to_string());
        }
        return Value::String(r.to_string());
    }
    Value::Array(x.coord_strings().into_iter().map(Value::String).collect())
}

/// Ingestion document for an elliptic packet.
pub fn packet_document(pi: &EllipticEigenPacket) -> Value {
    let ap: BTreeMap<String, Value> = pi.primes().map(|l| (l.to_string(), elem_json(pi.ap(l).unwrap()))).collect();
    let mut ap_sorted = serde_json::Map::new();
    let mut keys: Vec<u64> = ap.keys().map(|k| k.parse().unwrap()).collect();
    keys.sort();
    for k in keys {
        ap_sorted.insert(k.to_string(), ap[&k.to_string()].clone());
    }
    let mp: Vec<Value> = pi.field.min_poly().iter().map(|c| Value::from(c.to_string().parse::<i64>().unwrap())).collect();
    json!({
        "label": pi.label,
        "type": "elliptic",
        "level": pi.level,
        "weight": pi.weight,
        "character": {"modulus": pi.character.modulus(), "exponents": pi.character.exponents()},
        "field": {"min_poly": mp},
        "cutoff": pi.cutoff,
        "ap": Value::Object(ap_sorted),
    })
}

/// Ingestion document for a family stub.
pub fn stub_document(s: &FamilyStub) -> Value {
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| {
            json!({"m": r.m, "ap1": elem_json(&r.ap1), "ap2": elem_json(&r.ap2),
                   "central1": elem_json(&r.central1), "central2": elem_json(&r.central2)})
        })
        .collect();
    let mp: Vec<Value> = s.field.min_poly().iter().map(|c| Value::from(c.to_string().parse::<i64>().unwrap())).collect();
    let mut doc = json!({"label": s.label, "p": s.p, "k": s.k, "field": {"min_poly": mp},
                         "base_change": s.base_change, "rows": rows});
    if let Some(e) = s.embedding {
        doc["embedding"] = Value::from(e);
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_small_values() {
        let t = tau_table(12);
        assert_eq!(&t[1..=6], &[1, -24, 252, -1472, 4830, -6048]);
        assert_eq!(t[11], 534612);
        assert_eq!(t[12], -370944);
    }

    #[test]
    fn tau_multiplicative_and_large() {
        let t = tau_table(5000);
        assert_eq!(t[6], t[2] * t[3]);
        assert_eq!(t[4], t[2] * t[2] - 2048);
        assert_eq!(t[35], t[5] * t[7]);
    }

    #[test]
    fn ec11a_small() {
        let a: Vec<i64> = [2, 3, 5, 7, 11, 13].iter().map(|&l| ec11a_ap(l)).collect();
        assert_eq!(a, vec![-2, -1, 1, -2, 1, 4]);
    }

    #[test]
    fn weight_sixteen_form() {
        // Delta E4 = q + 216 q^2 - 3348 q^3 + ...
        let f = level_one_cusp_form(16, 3).unwrap();
        assert!(level_one_cusp_form(14, 3).is_err());
        assert_eq!(f[1..=3].iter().map(|x| x.to_string()).collect::<Vec<_>>(), vec!["1", "216", "-3348"]);
    }

    #[test]
    fn twist_has_eta_nebentypus() {
        let t = delta_twist_packet(50).unwrap();
        assert_eq!(t.level, 25);
        assert_eq!(t.character.order(), 2);
        assert!(t.ap(5).unwrap().is_zero());
        assert!(t.ramanujan_flags.is_empty());
    }
}
