//! Eigenform packets over Q and over a real quadratic field, JSON ingestion,
//! the Hecke prime-power recursion, quadratic base change and ideal-indexed
//! coefficients.

use crate::characters::{CharacterRepr, DirichletCharacter, QuadCharacter, SplitType};
use crate::exactnum::{
    factorize, parse_rational, primes_up_to, rat_int, NumberField, NumberFieldElem, Padic, Rational,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `a_{lambda^r}` from `a_{lambda^{r+1}} = a a_{lambda^r} - omega N^{k-1} a_{lambda^{r-1}}`.
pub fn hecke_prime_power(a: &NumberFieldElem, norm: u64, k: u32, omega: &NumberFieldElem, r: u32) -> NumberFieldElem {
    let field = a.field();
    let b = omega.clone() * NumberFieldElem::from_rational(field, rat_int(BigInt::from(norm).pow(k - 1)));
    let mut prev = NumberFieldElem::one(field);
    if r == 0 {
        return prev;
    }
    let mut cur = a.clone();
    for _ in 1..r {
        let next = a.clone() * cur.clone() - b.clone() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `a / n^{k-1}`.
pub fn unitary_normalize(a: &NumberFieldElem, n: u64, k: u32) -> NumberFieldElem {
    a.scale(&Rational::new(BigInt::one(), BigInt::from(n).pow(k - 1)))
}

fn field_value(chi: &DirichletCharacter, n: i64, field: &Arc<NumberField>) -> Result<NumberFieldElem> {
    chi.eval(n).coerce_into(field)
}

/// Newform over Q: weight, level, nebentypus and `a_l` for primes up to a cutoff.
#[derive(Clone, Debug)]
pub struct EllipticEigenPacket {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub character: DirichletCharacter,
    pub field: Arc<NumberField>,
    pub cutoff: u64,
    ap: BTreeMap<u64, NumberFieldElem>,
    /// Primes where the Ramanujan bound failed numerically.
    pub ramanujan_flags: Vec<u64>,
}

impl EllipticEigenPacket {
    pub fn new(
        label: impl Into<String>,
        level: u64,
        weight: u32,
        character: DirichletCharacter,
        field: Arc<NumberField>,
        cutoff: u64,
        ap: BTreeMap<u64, NumberFieldElem>,
    ) -> Result<Self> {
        if weight < 2 {
            return Err(Error::Schema(format!("weight {weight} < 2")));
        }
        if level % character.modulus() != 0 {
            return Err(Error::Schema(format!(
                "character modulus {} does not divide level {level}",
                character.modulus()
            )));
        }
        for l in primes_up_to(cutoff) {
            if !ap.contains_key(&l) {
                return Err(Error::MissingPrime(l));
            }
        }
        let ap = ap.into_iter().map(|(l, a)| Ok((l, a.coerce_into(&field)?))).collect::<Result<_>>()?;
        let mut pkt =
            EllipticEigenPacket { label: label.into(), level, weight, character, field, cutoff, ap, ramanujan_flags: vec![] };
        pkt.ramanujan_flags = pkt.ramanujan_violations();
        Ok(pkt)
    }

    fn ramanujan_violations(&self) -> Vec<u64> {
        let mut out = vec![];
        for (&l, a) in &self.ap {
            if self.level % l == 0 {
                continue;
            }
            let bound = 2.0 * (l as f64).powf((self.weight as f64 - 1.0) / 2.0);
            if (0..a.num_embeddings()).any(|i| a.embed(i).norm() > bound * (1.0 + 1e-6)) {
                out.push(l);
            }
        }
        out
    }

    pub fn is_bad(&self, l: u64) -> bool {
        self.level % l == 0
    }

    pub fn ap(&self, l: u64) -> Result<&NumberFieldElem> {
        if l > self.cutoff {
            return Err(Error::OutOfRange(l));
        }
        self.ap.get(&l).ok_or(Error::MissingPrime(l))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.ap.keys().copied()
    }

    /// `omega(n)` in the coefficient field.
    pub fn omega(&self, n: i64) -> Result<NumberFieldElem> {
        field_value(&self.character, n, &self.field)
    }

    /// `omega(l) l^{k-1}`.
    pub fn central_term(&self, l: u64) -> Result<NumberFieldElem> {
        Ok(self.omega(l as i64)?.scale(&rat_int(BigInt::from(l).pow(self.weight - 1))))
    }

    /// `a_{l^r}` at a good prime.
    pub fn prime_power(&self, l: u64, r: u32) -> Result<NumberFieldElem> {
        Ok(hecke_prime_power(self.ap(l)?, l, self.weight, &self.omega(l as i64)?, r))
    }

    /// Twist by a Dirichlet character: `a_l psi(l)`, nebentypus `omega psi^2`.
    pub fn twist(&self, psi: &DirichletCharacter, label: impl Into<String>) -> Result<Self> {
        let field = if self.field.degree() == 1 { psi.value_field().clone() } else { self.field.clone() };
        let mut ap = BTreeMap::new();
        for (&l, a) in &self.ap {
            let v = psi.eval(l as i64).coerce_into(&field)?;
            ap.insert(l, a.coerce_into(&field)?.try_mul(&v)?);
        }
        let m = psi.modulus();
        let level = crate::exactnum::lcm_u64(self.level, m * m);
        let character = self.character.mul(psi).mul(psi).lift_to(level)?;
        EllipticEigenPacket::new(label, level, self.weight, character, field, self.cutoff, ap)
    }
}

/// Eigenvalue data at the primes above a rational prime `l`.
#[derive(Clone, Debug, PartialEq)]
pub enum HilbertEntry {
    Split([NumberFieldElem; 2]),
    Inert(NumberFieldElem),
    Ramified(NumberFieldElem),
    Unsupported,
}

impl HilbertEntry {
    pub fn split_type_name(&self) -> &'static str {
        match self {
            HilbertEntry::Split(_) => "split",
            HilbertEntry::Inert(_) => "inert",
            HilbertEntry::Ramified(_) => "ramified",
            HilbertEntry::Unsupported => "unsupported",
        }
    }
}

/// Hilbert eigenform of parallel weight over `Q(sqrt D)`. The central
/// character is `omega o Norm` for the stored Dirichlet character `omega`.
#[derive(Clone, Debug)]
pub struct HilbertEigenPacket {
    pub label: String,
    pub eta: QuadCharacter,
    pub level_norm: u64,
    pub weight: (u32, u32),
    pub central: DirichletCharacter,
    pub field: Arc<NumberField>,
    pub cutoff: u64,
    entries: BTreeMap<u64, HilbertEntry>,
}

impl HilbertEigenPacket {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        eta: QuadCharacter,
        level_norm: u64,
        weight: (u32, u32),
        central: DirichletCharacter,
        field: Arc<NumberField>,
        cutoff: u64,
        entries: BTreeMap<u64, HilbertEntry>,
    ) -> Result<Self> {
        if weight.0 % 2 != weight.1 % 2 {
            return Err(Error::Schema(format!("weights {weight:?} differ in parity")));
        }
        for l in primes_up_to(cutoff) {
            let Some(e) = entries.get(&l) else {
                return Err(Error::MissingPrime(l));
            };
            let expected = match eta.split_type(l) {
                SplitType::Split => "split",
                SplitType::Inert => "inert",
                SplitType::Ramified => "ramified",
            };
            if !matches!(e, HilbertEntry::Unsupported) && e.split_type_name() != expected {
                return Err(Error::Schema(format!("prime {l} is {expected} in Q(sqrt {}), not {}", eta.disc, e.split_type_name())));
            }
        }
        Ok(HilbertEigenPacket { label: label.into(), eta, level_norm, weight, central, field, cutoff, entries })
    }

    pub fn parallel_weight(&self) -> Result<u32> {
        if self.weight.0 == self.weight.1 {
            Ok(self.weight.0)
        } else {
            Err(Error::Precondition(format!("weight {:?} is not parallel", self.weight)))
        }
    }

    pub fn entry(&self, l: u64) -> Result<&HilbertEntry> {
        if l > self.cutoff {
            return Err(Error::OutOfRange(l));
        }
        self.entries.get(&l).ok_or(Error::MissingPrime(l))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&u64, &HilbertEntry)> {
        self.entries.iter()
    }

    /// `omega_Pi(lambda) = omega(N lambda)` for a prime of norm `norm`.
    pub fn omega_of_norm(&self, norm: u64) -> Result<NumberFieldElem> {
        field_value(&self.central, norm as i64, &self.field)
    }

    /// `omega|_Q` of the central character, which is `omega^2`.
    pub fn central_restricted(&self) -> DirichletCharacter {
        self.central.pow(2)
    }

    /// `a_{(l^e) O_F}`.
    pub fn rational_prime_power_coefficient(&self, l: u64, e: u32) -> Result<NumberFieldElem> {
        let k = self.parallel_weight()?;
        Ok(match self.entry(l)? {
            HilbertEntry::Split([a1, a2]) => {
                let w = self.omega_of_norm(l)?;
                hecke_prime_power(a1, l, k, &w, e).try_mul(&hecke_prime_power(a2, l, k, &w, e))?
            }
            HilbertEntry::Inert(a) => hecke_prime_power(a, l * l, k, &self.omega_of_norm(l * l)?, e),
            HilbertEntry::Ramified(a) => hecke_prime_power(a, l, k, &self.omega_of_norm(l)?, 2 * e),
            HilbertEntry::Unsupported => return Err(Error::UnsupportedBadPrime(l)),
        })
    }

    /// `a_{n O_F}`, multiplicative over rational primes.
    pub fn ideal_coefficient(&self, n: u64) -> Result<NumberFieldElem> {
        let mut acc = NumberFieldElem::one(&self.field);
        for (l, e) in factorize(n) {
            acc = acc.try_mul(&self.rational_prime_power_coefficient(l, e)?)?;
        }
        Ok(acc)
    }

    /// Primes dividing the level (entries flagged unsupported).
    pub fn bad_primes(&self) -> Vec<u64> {
        self.entries.iter().filter(|(_, e)| matches!(e, HilbertEntry::Unsupported)).map(|(l, _)| *l).collect()
    }
}

/// Quadratic base change of `pi` to `Q(sqrt D)`.
pub fn base_change(pi: &EllipticEigenPacket, disc: u64) -> Result<HilbertEigenPacket> {
    let eta = QuadCharacter::new(disc)?;
    let k = pi.weight;
    let mut entries = BTreeMap::new();
    for l in pi.primes() {
        let a = pi.ap(l)?.clone();
        let e = if pi.is_bad(l) {
            HilbertEntry::Unsupported
        } else {
            match eta.split_type(l) {
                SplitType::Split => HilbertEntry::Split([a.clone(), a]),
                SplitType::Inert => {
                    let b = pi.central_term(l)?;
                    HilbertEntry::Inert(a.clone() * a - b.scale(&rat_int(2)))
                }
                SplitType::Ramified => HilbertEntry::Ramified(a),
            }
        };
        entries.insert(l, e);
    }
    HilbertEigenPacket::new(
        format!("BC({})/Q(sqrt {disc})", pi.label),
        eta,
        pi.level * pi.level,
        (k, k),
        pi.character.clone(),
        pi.field.clone(),
        pi.cutoff,
        entries,
    )
}

/// A parsed ingestion document.
#[derive(Clone, Debug)]
pub enum Packet {
    Elliptic(EllipticEigenPacket),
    Hilbert(HilbertEigenPacket),
}

impl Packet {
    pub fn label(&self) -> &str {
        match self {
            Packet::Elliptic(p) => &p.label,
            Packet::Hilbert(p) => &p.label,
        }
    }

    pub fn cutoff(&self) -> u64 {
        match self {
            Packet::Elliptic(p) => p.cutoff,
            Packet::Hilbert(p) => p.cutoff,
        }
    }
}

#[derive(Deserialize)]
struct FieldDoc {
    min_poly: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightDoc {
    One(u32),
    Pair([u32; 2]),
}

#[derive(Deserialize)]
struct PacketDoc {
    label: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    level: Option<u64>,
    #[serde(default)]
    level_norm: Option<u64>,
    weight: WeightDoc,
    #[serde(default)]
    character: Option<CharacterRepr>,
    #[serde(default)]
    field: Option<FieldDoc>,
    #[serde(default)]
    cutoff: Option<u64>,
    #[serde(default)]
    disc: Option<u64>,
    ap: BTreeMap<String, Value>,
}

fn parse_scalar(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat_int(i))
            } else {
                n.to_string().parse::<BigInt>().map(rat_int).map_err(|_| Error::Schema(format!("non-integer number {n}")))
            }
        }
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Schema(format!("bad rational {s:?}"))),
        _ => Err(Error::Schema(format!("expected a number, got {v}"))),
    }
}

/// A coefficient: a scalar or a coordinate vector in the power basis.
pub fn parse_coords(v: &Value, field: &Arc<NumberField>) -> Result<NumberFieldElem> {
    let coords = match v {
        Value::Array(xs) => xs.iter().map(parse_scalar).collect::<Result<Vec<_>>>()?,
        _ => vec![parse_scalar(v)?],
    };
    if coords.len() > field.degree() {
        return Err(Error::Schema(format!("{} coordinates for a degree {} field", coords.len(), field.degree())));
    }
    let mut c = coords;
    c.resize(field.degree(), Rational::zero());
    NumberFieldElem::new(field, c)
}

fn parse_prime(s: &str) -> Result<u64> {
    let l: u64 = s.trim().parse().map_err(|_| Error::Schema(format!("bad prime key {s:?}")))?;
    if !crate::exactnum::is_prime(l) {
        return Err(Error::Schema(format!("key {l} is not prime")));
    }
    Ok(l)
}

/// Parses and validates one packet document.
pub fn ingest_packet(text: &str) -> Result<Packet> {
    let doc: PacketDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let field = match &doc.field {
        Some(f) => NumberField::from_i64(&f.min_poly)?,
        None => NumberField::rationals(),
    };
    let character = match &doc.character {
        Some(c) => DirichletCharacter::from_repr(c)?,
        None => DirichletCharacter::trivial(1),
    };
    let mut primes = BTreeMap::new();
    for (k, v) in &doc.ap {
        primes.insert(parse_prime(k)?, v);
    }
    let cutoff = doc.cutoff.unwrap_or_else(|| primes.keys().next_back().copied().unwrap_or(1));
    match doc.kind.as_str() {
        "elliptic" => {
            let WeightDoc::One(k) = doc.weight else {
                return Err(Error::Schema("elliptic packets take a single weight".into()));
            };
            let level = doc.level.ok_or_else(|| Error::Schema("missing level".into()))?;
            let character = character.lift_to(level)?;
            let ap = primes.iter().map(|(&l, v)| Ok((l, parse_coords(v, &field)?))).collect::<Result<_>>()?;
            Ok(Packet::Elliptic(EllipticEigenPacket::new(doc.label, level, k, character, field, cutoff, ap)?))
        }
        "hilbert" => {
            let weight = match doc.weight {
                WeightDoc::One(k) => (k, k),
                WeightDoc::Pair([a, b]) => (a, b),
            };
            let disc = doc.disc.ok_or_else(|| Error::Schema("missing disc".into()))?;
            let eta = QuadCharacter::new(disc)?;
            let level_norm = doc.level_norm.or(doc.level).unwrap_or(1);
            let mut entries = BTreeMap::new();
            for (&l, v) in &primes {
                entries.insert(l, parse_hilbert_entry(l, v, &field)?);
            }
            Ok(Packet::Hilbert(HilbertEigenPacket::new(
                doc.label, eta, level_norm, weight, character, field, cutoff, entries,
            )?))
        }
        other => Err(Error::Schema(format!("unknown packet type {other:?}"))),
    }
}

fn parse_hilbert_entry(l: u64, v: &Value, field: &Arc<NumberField>) -> Result<HilbertEntry> {
    let obj = v.as_object().ok_or_else(|| Error::Schema(format!("entry for {l} must be an object")))?;
    if obj.get("unsupported").and_then(Value::as_bool) == Some(true) {
        return Ok(HilbertEntry::Unsupported);
    }
    let st = obj.get("split_type").and_then(Value::as_str).ok_or_else(|| Error::Schema(format!("entry {l}: split_type")))?;
    let vals = obj.get("values").and_then(Value::as_array).ok_or_else(|| Error::Schema(format!("entry {l}: values")))?;
    let vals = vals.iter().map(|x| parse_coords(x, field)).collect::<Result<Vec<_>>>()?;
    let want = if st == "split" { 2 } else { 1 };
    if vals.len() != want {
        return Err(Error::Schema(format!("entry {l}: {st} needs {want} value(s), got {}", vals.len())));
    }
    let mut it = vals.into_iter();
    Ok(match st {
        "split" => HilbertEntry::Split([it.next().unwrap(), it.next().unwrap()]),
        "inert" => HilbertEntry::Inert(it.next().unwrap()),
        "ramified" => HilbertEntry::Ramified(it.next().unwrap()),
        _ => return Err(Error::Schema(format!("entry {l}: unknown split_type {st:?}"))),
    })
}

/// Classical-weight stand-in for a family: eigenvalues at the two primes
/// above a split `p` at weights `(k + 2m, k)`.
#[derive(Clone, Debug)]
pub struct FamilyStub {
    pub label: String,
    pub p: u64,
    pub k: u32,
    pub field: Arc<NumberField>,
    /// Residue mod `p` of the root of the minimal polynomial fixing the
    /// p-adic embedding (unused for `Q`).
    pub embedding: Option<u64>,
    pub base_change: bool,
    pub rows: Vec<StubRow>,
}

#[derive(Clone, Debug)]
pub struct StubRow {
    pub m: u32,
    pub ap1: NumberFieldElem,
    pub ap2: NumberFieldElem,
    pub central1: NumberFieldElem,
    pub central2: NumberFieldElem,
}

#[derive(Deserialize)]
struct StubDoc {
    label: String,
    p: u64,
    k: u32,
    #[serde(default)]
    field: Option<FieldDoc>,
    #[serde(default)]
    embedding: Option<u64>,
    #[serde(default)]
    base_change: bool,
    rows: Vec<StubRowDoc>,
}

#[derive(Deserialize)]
struct StubRowDoc {
    m: u32,
    ap1: Value,
    ap2: Value,
    #[serde(default)]
    central1: Option<Value>,
    #[serde(default)]
    central2: Option<Value>,
}

impl FamilyStub {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StubDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let field = match &doc.field {
            Some(f) => NumberField::from_i64(&f.min_poly)?,
            None => NumberField::rationals(),
        };
        if !crate::exactnum::is_prime(doc.p) || doc.p == 2 {
            return Err(Error::Schema(format!("p = {} must be an odd prime", doc.p)));
        }
        if field.degree() > 1 && doc.embedding.is_none() {
            return Err(Error::Schema("non-rational coefficient field needs an embedding root mod p".into()));
        }
        let one = Value::from(1);
        let rows = doc
            .rows
            .iter()
            .map(|r| {
                Ok(StubRow {
                    m: r.m,
                    ap1: parse_coords(&r.ap1, &field)?,
                    ap2: parse_coords(&r.ap2, &field)?,
                    central1: parse_coords(r.central1.as_ref().unwrap_or(&one), &field)?,
                    central2: parse_coords(r.central2.as_ref().unwrap_or(&one), &field)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyStub {
            label: doc.label,
            p: doc.p,
            k: doc.k,
            field,
            embedding: doc.embedding,
            base_change: doc.base_change,
            rows,
        })
    }

    /// Image of a coefficient-field element in `Q_p`, known mod `p^n`.
    pub fn embed(&self, x: &NumberFieldElem, n: i64) -> Result<Padic> {
        embed_padic(x, self.p, self.embedding, n)
    }

    pub fn row(&self, m: u32) -> Option<&StubRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    /// Rows where `a_{p1}(m)` fails to be a p-adic unit.
    pub fn non_ordinary_rows(&self) -> Result<Vec<u32>> {
        let mut out = vec![];
        for r in &self.rows {
            if !self.embed(&r.ap1, 1)?.is_unit() {
                out.push(r.m);
            }
        }
        Ok(out)
    }
}

/// Embeds a number-field element into `Q_p` by sending the generator to the
/// Hensel lift of the simple root `root_mod_p` of the minimal polynomial.
pub fn embed_padic(x: &NumberFieldElem, p: u64, root_mod_p: Option<u64>, n: i64) -> Result<Padic> {
    let field = x.field();
    // denominators may cost precision
    let den_loss = x
        .coords()
        .iter()
        .map(|c| crate::exactnum::int_valuation(c.denom(), p) as i64)
        .max()
        .unwrap_or(0);
    let work = n + den_loss;
    if field.degree() == 1 {
        return Ok(Padic::from_rational(&x.coords()[0], p, n));
    }
    let r0 = root_mod_p.ok_or_else(|| Error::Precondition("no p-adic embedding declared".into()))?;
    let f: Vec<Padic> = field.min_poly().iter().map(|c| Padic::from_int(p, work, c.clone())).collect();
    let eval = |t: &Padic, coeffs: &[Padic]| {
        coeffs.iter().rev().fold(Padic::zero(p, work), |acc, c| acc * t.clone() + c.clone())
    };
    let df: Vec<Padic> = f.iter().enumerate().skip(1).map(|(i, c)| c.clone() * Padic::from_int(p, work, i as i64)).collect();
    let mut t = Padic::from_int(p, work, r0);
    if !eval(&t, &f).reduce(1).is_zero() {
        return Err(Error::Precondition(format!("{r0} is not a root of the minimal polynomial mod {p}")));
    }
    if !eval(&t, &df).is_unit() {
        return Err(Error::Precondition(format!("root {r0} mod {p} is not simple")));
    }
    for _ in 0..(64 - (work.max(1) as u64).leading_zeros()) + 1 {
        t = (t.clone() - eval(&t, &f).try_div(&eval(&t, &df))?).reduce(work);
    }
    let mut acc = Padic::zero(p, work);
    for c in x.coords().iter().rev() {
        acc = acc * t.clone() + Padic::from_rational(c, p, work);
    }
    Ok(acc.reduce(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn rational(n: i64) -> NumberFieldElem {
        NumberFieldElem::from_int(&NumberField::rationals(), n)
    }

    #[test]
    fn hecke_recursion_small() {
        let one = rational(1);
        assert_eq!(hecke_prime_power(&rational(-24), 2, 12, &one, 0), one);
        assert_eq!(hecke_prime_power(&rational(-24), 2, 12, &one, 1), rational(-24));
        assert_eq!(hecke_prime_power(&rational(-24), 2, 12, &one, 2), rational(-1472));
    }

    #[test]
    fn unitary_shift() {
        assert_eq!(unitary_normalize(&rational(-3520), 2, 12).as_rational(), Some(rat(-55, 32)));
    }

    #[test]
    fn missing_prime_rejected() {
        let doc = r#"{"label":"x","type":"elliptic","level":1,"weight":12,"cutoff":10,
                      "ap":{"2":-24,"5":4830,"7":-16744}}"#;
        assert!(matches!(ingest_packet(doc), Err(Error::MissingPrime(3))));
    }

    #[test]
    fn gaussian_embedding_at_five() {
        let f = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let i = NumberFieldElem::gen_pow(&f, 1);
        let x = embed_padic(&i, 5, Some(2), 8).unwrap();
        assert_eq!(x.clone() * x, Padic::from_int(5, 8, -1));
    }
}
