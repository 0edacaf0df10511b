use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::Report;
use asai_core::eigendata::FamilyStub;
use asai_core::eisfamily::{stabilization_check, QExpFamily, Slot};
use asai_core::exactnum::{bernoulli_table, rat, Padic, Rational};
use asai_core::iwasawa::{kl_truncation, kubota_leopoldt, residue_at_trivial, zeta_value, WeightChar};
use asai_core::padic_euler::{row_reports, symbolic_identity_holds, trivial_zero_detect};
use num_traits::One;

/// Number of out-of-sample weights checked by `kl-zeta`.
const KL_CHECKS: u64 = 6;

pub fn kl_zeta(cfg: &RunConfig) -> Result<Report> {
    let p = cfg.odd_prime()?;
    let n = cfg.prec();
    let branch = cfg.branch.unwrap_or(0);
    let work = n + 2;
    let m = kl_truncation(p, work);
    let f = kubota_leopoldt(p, branch, work, m)?;
    let mut r = Report::new("kl-zeta", &["k", "value", "expected", "status"]);
    r.set("p", p);
    r.set("branch", branch);
    r.set("precision", n);
    r.set("working_precision", work);
    r.set("truncation", m);
    r.set("pole_order", f.pole_order());
    if branch == 0 {
        let res = residue_at_trivial(&f)?.reduce(n);
        let one_minus = Rational::one() - rat(1, p as i64);
        let named = if res == Padic::from_rational(&one_minus, p, n) {
            format!("1 - 1/{p} = {one_minus}")
        } else if res == Padic::from_rational(&-one_minus.clone(), p, n) {
            format!("-(1 - 1/{p}) = {}", -one_minus)
        } else {
            "unidentified".to_string()
        };
        r.set("residue", res);
        r.set("residue_closed_form", named);
    }
    let first = if branch == 0 { 1 } else { 0 };
    let ks: Vec<u64> = (0..KL_CHECKS).map(|t| branch + (p - 1) * (first + m as u64 + t)).collect();
    let table = bernoulli_table(*ks.last().expect("nonempty") as usize);
    let mut bad = 0;
    for k in ks {
        let v = f.eval_at_weight(&WeightChar::Int(k as i64))?;
        let want = Padic::from_rational(&zeta_value(p, k, &table), p, n);
        let ok = v.precision() >= n && v.reduce(n) == want;
        bad += usize::from(!ok);
        r.push(vec![k.to_string(), v.reduce(n).to_string(), want.to_string(), if ok { "match" } else { "MISMATCH" }.into()]);
    }
    r.fail_if(bad > 0);
    Ok(r)
}

fn family(kind: &str, level: u64, p: u64, trunc: usize) -> Result<QExpFamily> {
    Ok(match kind {
        "katz" => QExpFamily::katz(level, p, trunc)?,
        "flat" => QExpFamily::flat(level, p, trunc)?,
        "sharp" => QExpFamily::sharp(level, p, trunc)?,
        _ => return Err(CliError::Input(format!("--kind {kind:?}: expected katz, flat or sharp"))),
    })
}

pub fn eis_family(cfg: &RunConfig) -> Result<Report> {
    let p = cfg.odd_prime()?;
    let kind = cfg.kind.as_deref().unwrap_or("katz");
    let fam = family(kind, cfg.level(), p, cfg.trunc())?;
    let mut r = Report::new("eis-family", &["n", "coefficient"]);
    r.set("kind", kind);
    r.set("level", fam.level);
    r.set("p", p);
    r.set("truncation", fam.truncation());
    r.set("notation", "c*[a|b]*z^j = c kappa1(a) kappa2(b) zeta_N^j");
    r.set("constant", format!("{:?}", fam.constant));
    for (n, c) in fam.coeffs().iter().enumerate().skip(1) {
        r.push(vec![n.to_string(), c.to_string()]);
    }
    Ok(r)
}

pub fn depletion_check(cfg: &RunConfig) -> Result<Report> {
    let p = cfg.odd_prime()?;
    let (level, trunc) = (cfg.level(), cfg.trunc());
    let katz = QExpFamily::katz(level, p, trunc)?;
    let flat = QExpFamily::flat(level, p, trunc)?.deplete();
    let sharp = QExpFamily::sharp(level, p, trunc)?.deplete();
    let first = katz.slice(Slot::Kappa(-1), Slot::Int(0))?;
    let second = katz.slice(Slot::Int(0), Slot::Kappa(-1))?;
    let mut r = Report::new("depletion-check", &["n", "flat_vs_first_slice", "sharp_vs_second_slice"]);
    r.set("level", level);
    r.set("p", p);
    r.set("truncation", trunc);
    let mut bad = 0;
    for n in 1..=trunc {
        let a = flat.coeffs()[n] == first.coeffs()[n];
        let b = sharp.coeffs()[n] == second.coeffs()[n];
        bad += usize::from(!a) + usize::from(!b);
        let s = |ok: bool| if ok { "match" } else { "MISMATCH" }.to_string();
        r.push(vec![n.to_string(), s(a), s(b)]);
    }
    r.set("mismatches", bad);
    r.fail_if(bad > 0);
    Ok(r)
}

pub fn stabilization(cfg: &RunConfig) -> Result<Report> {
    let p = cfg.odd_prime()?;
    let k = cfg.k.unwrap_or(2);
    let rep = stabilization_check(k, cfg.level(), p, cfg.trunc(), cfg.prec())?;
    let mut r = Report::new("stabilization-check", &["n"]);
    r.set("k", rep.k);
    r.set("level", rep.level);
    r.set("p", rep.p);
    r.set("truncation", rep.truncation);
    r.set("precision", rep.precision);
    r.set("constant_match", rep.constant_match);
    r.set("constant_convention", &rep.constant_convention);
    r.set("mismatches", rep.mismatches.len());
    for n in &rep.mismatches {
        r.push(vec![n.to_string()]);
    }
    r.fail_if(!rep.passed());
    Ok(r)
}

fn load_stub(cfg: &RunConfig) -> Result<FamilyStub> {
    Ok(FamilyStub::from_json(&cfg.read(&cfg.stub, "stub")?)?)
}

fn describe_stub(r: &mut Report, s: &FamilyStub) {
    r.set("label", &s.label);
    r.set("p", s.p);
    r.set("k", s.k);
    r.set("base_change", s.base_change);
    let c: Vec<String> = s.field.min_poly().iter().map(|c| c.to_string()).collect();
    r.set("coefficient_field", format!("[{}]", c.join(",")));
    r.set("embedding_root_mod_p", s.embedding.map(|e| e.to_string()).unwrap_or_else(|| "none".into()));
}

pub fn ep_factor(cfg: &RunConfig) -> Result<Report> {
    let stub = load_stub(cfg)?;
    let n = cfg.prec();
    let rows = row_reports(&stub, n)?;
    let mut r = Report::new("ep-factor", &["m", "v_alpha1", "flat", "depleted", "euler_factor", "status"]);
    describe_stub(&mut r, &stub);
    r.set("precision", n);
    let sym = symbolic_identity_holds();
    r.set("symbolic_identity", sym);
    r.fail_if(!sym);
    for row in rows {
        r.fail_if(!row.product_matches);
        r.push(vec![
            row.m.to_string(),
            row.v_alpha1.to_string(),
            row.flat_part,
            row.depleted_part,
            row.euler_ep,
            if row.product_matches { "match" } else { "MISMATCH" }.into(),
        ]);
    }
    Ok(r)
}

pub fn trivial_zero(cfg: &RunConfig) -> Result<Report> {
    let stub = load_stub(cfg)?;
    let n = cfg.prec();
    let t = trivial_zero_detect(&stub, n)?;
    let mut r = Report::new("trivial-zero", &["structural_zero", "valuation", "precision", "depleted", "forced_vanishing", "verdict"]);
    describe_stub(&mut r, &stub);
    r.push(vec![
        t.structural_zero.to_string(),
        t.valuation.map(|v| v.to_string()).unwrap_or_else(|| "inf".into()),
        t.precision.to_string(),
        t.depleted,
        t.forced_vanishing.to_string(),
        t.verdict,
    ]);
    Ok(r)
}
