use asai_core::catalog::delta_packet;
use asai_core::characters::{kronecker, DirichletCharacter, QuadCharacter, SplitType};
use asai_core::eigendata::base_change;
use asai_core::exactnum::{hensel_unit_root, rat, MPoly, NumberField, NumberFieldElem, Padic, RatFun, Rational};
use asai_core::iwasawa::{IwasawaElem, WeightChar};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..15).prop_map(|(n, d)| rat(n, d))
}

fn cyc5_elem() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rat(), 4)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn number_field_axioms(a in cyc5_elem(), b in cyc5_elem(), c in cyc5_elem()) {
        let k = NumberField::cyclotomic(5);
        let (a, b, c) = (
            NumberFieldElem::new(&k, a).unwrap(),
            NumberFieldElem::new(&k, b).unwrap(),
            NumberFieldElem::new(&k, c).unwrap(),
        );
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inv().unwrap(), NumberFieldElem::one(&k));
        }
    }

    #[test]
    fn padic_is_a_ring_map(a in small_rat(), b in small_rat(), p in prop::sample::select(vec![3u64, 5, 7])) {
        let n = 12;
        let (pa, pb) = (Padic::from_rational(&a, p, n), Padic::from_rational(&b, p, n));
        prop_assert_eq!(pa.clone() + pb.clone(), Padic::from_rational(&(a.clone() + b.clone()), p, n));
        prop_assert_eq!(pa.clone() * pb.clone(), Padic::from_rational(&(a.clone() * b.clone()), p, n));
        if b != rat(0, 1) {
            if let Ok(q) = pa.try_div(&pb) {
                let exact = Padic::from_rational(&(a.clone() / b.clone()), p, n);
                prop_assert_eq!(q.reduce(q.precision().min(exact.precision())), exact.reduce(q.precision().min(exact.precision())));
            }
        }
    }

    #[test]
    fn padic_precision_rules(a in 1i64..1000, b in 1i64..1000, p in prop::sample::select(vec![3u64, 5, 7])) {
        let x = Padic::from_int(p, 10, a);
        let y = Padic::from_int(p, 6, b);
        prop_assert_eq!((x.clone() + y.clone()).precision(), 6);
        let vx = x.valuation().unwrap();
        let vy = y.valuation().unwrap();
        prop_assert_eq!((x * y).precision(), (10 + vy).min(6 + vx));
    }

    #[test]
    fn hensel_root_is_a_root(a in 1i64..500, b in 1i64..500, p in prop::sample::select(vec![5u64, 7, 11])) {
        prop_assume!(a % p as i64 != 0);
        let n = 15;
        let pa = Padic::from_int(p, n, a);
        let pb = Padic::from_int(p, n, b * p as i64);
        let r = hensel_unit_root(&pa, &pb, n).unwrap();
        let val = r.clone() * r.clone() - pa * r.clone() + pb;
        prop_assert!(val.is_zero());
        prop_assert!(r.is_unit());
    }

    #[test]
    fn ratfun_normal_form(c in proptest::collection::vec(-6i64..6, 6), d in proptest::collection::vec(-6i64..6, 6)) {
        let nv = 2;
        let x = MPoly::var(nv, 0);
        let y = MPoly::var(nv, 1);
        let mk = |v: &[i64]| {
            let mut p = MPoly::constant(nv, rat(v[0], 1));
            p = p + x.clone().scale(&rat(v[1], 1)) + y.clone().scale(&rat(v[2], 1));
            p = p + (x.clone() * y.clone()).scale(&rat(v[3], 1)) + (x.clone() * x.clone()).scale(&rat(v[4], 1));
            p + (y.clone() * y.clone()).scale(&rat(v[5], 1))
        };
        let f = mk(&c);
        let g = mk(&d);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let r = RatFun::new(f.clone(), g.clone()).unwrap();
        let h = MPoly::constant(nv, rat(3, 1)) + x.clone() - y.clone();
        let r2 = RatFun::new(f * h.clone(), g * h).unwrap();
        prop_assert_eq!(&r, &r2);
        let back = r.clone() * r.inv().unwrap();
        prop_assert_eq!(back, RatFun::int(nv, 1));
    }

    #[test]
    fn characters_multiplicative(m in prop::sample::select(vec![5u64, 8, 12, 15, 16, 21]), e in proptest::collection::vec(0u64..12, 4), a in 1i64..400, b in 1i64..400) {
        let ngens = asai_core::characters::unit_group_generators(m).len();
        let chi = DirichletCharacter::new(m, e[..ngens].to_vec()).unwrap();
        prop_assert_eq!(chi.eval(a * b), chi.eval(a) * chi.eval(b));
        if gcd(a as u64, m) != 1 {
            prop_assert!(chi.eval(a).is_zero());
        }
    }

    #[test]
    fn quadratic_splitting(l in prop::sample::select(asai_core::exactnum::primes_up_to(400)), d in prop::sample::select(vec![5u64, 8, 12, 13])) {
        let eta = QuadCharacter::new(d).unwrap();
        let k = kronecker(d as i64, l);
        let want = match k {
            1 => SplitType::Split,
            -1 => SplitType::Inert,
            _ => SplitType::Ramified,
        };
        prop_assert_eq!(eta.split_type(l), want);
    }

    #[test]
    fn iwasawa_eval_is_multiplicative(c1 in proptest::collection::vec(-30i64..30, 5), c2 in proptest::collection::vec(-30i64..30, 5), j in 0i64..6) {
        let p = 5u64;
        let n = 8;
        let branch = 2;
        let r1: Vec<Rational> = c1.iter().map(|&v| rat(v, 1)).collect();
        let r2: Vec<Rational> = c2.iter().map(|&v| rat(v, 1)).collect();
        let a = IwasawaElem::from_rationals(p, branch, n, &r1).unwrap();
        let b = IwasawaElem::from_rationals(p, branch, n, &r2).unwrap();
        let w = WeightChar::Int(branch as i64 + 4 * j);
        let ab = a.try_mul(&b).unwrap().eval_at_weight(&w).unwrap();
        let prod = a.eval_at_weight(&w).unwrap() * b.eval_at_weight(&w).unwrap();
        let k = ab.precision().min(prod.precision());
        prop_assert_eq!(ab.reduce(k), prod.reduce(k));
        let sum = a.try_add(&b).unwrap().eval_at_weight(&w).unwrap();
        let s2 = a.eval_at_weight(&w).unwrap() + b.eval_at_weight(&w).unwrap();
        let k = sum.precision().min(s2.precision());
        prop_assert_eq!(sum.reduce(k), s2.reduce(k));
    }
}

#[test]
fn ideal_coefficients_multiplicative() {
    let pi = delta_packet(200).unwrap();
    let bc = base_change(&pi, 5).unwrap();
    for m in 1u64..30 {
        for n in 1u64..30 {
            if gcd(m, n) == 1 && m * n <= 200 && m * n % 5 != 0 {
                let lhs = bc.ideal_coefficient(m * n).unwrap();
                let rhs = bc.ideal_coefficient(m).unwrap() * bc.ideal_coefficient(n).unwrap();
                assert_eq!(lhs, rhs, "m = {m}, n = {n}");
            }
        }
    }
}
