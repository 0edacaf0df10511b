use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::Report;
use asai_core::exactnum::rat;
use asai_core::localzeta::{ratio_depleted_vs_ordinary, verify_zeta1_spherical, verify_zeta2_limit, IdentityReport, LocalField, LocalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGNS: [(i8, i8); 3] = [(1, 1), (-1, 1), (-1, -1)];

fn random_params(rng: &mut ChaCha8Rng) -> Result<LocalParams> {
    let mut r = || {
        let n = rng.gen_range(1i64..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        rat(n, rng.gen_range(1..=5))
    };
    Ok(LocalParams::from_rationals([r(), r(), r(), r()])?)
}

fn push(r: &mut Report, label: &str, res: asai_core::Result<IdentityReport>) {
    match res {
        Ok(rep) => {
            r.fail_if(!rep.verdict);
            let inputs: Vec<String> = rep.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let checks: Vec<String> = rep.checks.iter().map(|(k, v)| format!("{k}={v}")).collect();
            r.push(vec![
                label.to_string(),
                rep.identity,
                inputs.join("; "),
                checks.join("; "),
                if rep.verdict { "pass" } else { "FAIL" }.into(),
            ]);
        }
        Err(e) => {
            r.fail_if(true);
            r.push(vec![label.to_string(), String::new(), String::new(), String::new(), format!("error: {e}")]);
        }
    }
}

pub fn localzeta_verify(cfg: &RunConfig) -> Result<Report> {
    let field = match cfg.q {
        Some(q) => LocalField::concrete(q)?,
        None => LocalField::symbolic(),
    };
    let kind = cfg.kind.as_deref().unwrap_or("all");
    let (z1, z2, ratio) = match kind {
        "zeta1" => (true, false, false),
        "zeta2" => (false, true, false),
        "ratio" => (false, false, true),
        "all" => (true, true, true),
        _ => return Err(CliError::Input(format!("--kind {kind:?}: expected zeta1, zeta2, ratio or all"))),
    };
    let trials = cfg.trials.unwrap_or(5);
    let rs: Vec<u32> = match cfg.r {
        Some(r) => vec![r],
        None => vec![1, 2, 3],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut r = Report::new("localzeta-verify", &["case", "identity", "inputs", "checks", "verdict"]);
    r.set("q", cfg.q.map(|q| q.to_string()).unwrap_or_else(|| "symbolic".into()));
    r.set("kind", kind);
    r.set("trials", trials);
    r.set("seed", cfg.seed);
    if z1 {
        if cfg.q.is_none() {
            push(&mut r, "zeta1/symbolic", verify_zeta1_spherical(&LocalParams::symbolic(), &field));
        }
        for t in 0..trials {
            let p = random_params(&mut rng)?;
            push(&mut r, &format!("zeta1/random{t}"), verify_zeta1_spherical(&p, &field));
        }
    }
    if z2 {
        for (i, s) in SIGNS.iter().enumerate() {
            for &level in &rs {
                let p = LocalParams::symbolic().with_signs(s.0, s.1);
                push(&mut r, &format!("zeta2/symbolic/signs{i}/r{level}"), verify_zeta2_limit(level, &p, &field));
            }
        }
        for t in 0..trials {
            let s = SIGNS[t as usize % SIGNS.len()];
            let p = random_params(&mut rng)?.with_signs(s.0, s.1);
            for &level in &rs {
                push(&mut r, &format!("zeta2/random{t}/r{level}"), verify_zeta2_limit(level, &p, &field));
            }
        }
    }
    if ratio {
        let res = ratio_depleted_vs_ordinary(&LocalParams::symbolic(), &field).map(|x| x.1);
        push(&mut r, "ratio/symbolic", res);
    }
    Ok(r)
}
