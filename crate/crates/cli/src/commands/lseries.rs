use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::Report;
use asai_core::asai::{
    asai_euler_factor, distinguished_character, factorization_check, imprimitive_asai_coeffs, imprimitive_asai_embedded,
    pole_probe, BadPrimePolicy, EmbeddedSeq, ProbeConfig, Verdict,
};
use asai_core::characters::{DirichletCharacter, QuadCharacter};
use asai_core::eigendata::{base_change, ingest_packet, EllipticEigenPacket, HilbertEigenPacket, HilbertEntry, Packet};
use asai_core::exactnum::{primes_up_to, NumberField};
use std::sync::Arc;

fn min_poly(f: &Arc<NumberField>) -> String {
    let c: Vec<String> = f.min_poly().iter().map(|c| c.to_string()).collect();
    format!("[{}]", c.join(","))
}

fn load(cfg: &RunConfig) -> Result<Packet> {
    Ok(ingest_packet(&cfg.read(&cfg.pi, "pi")?)?)
}

fn load_elliptic(cfg: &RunConfig) -> Result<EllipticEigenPacket> {
    match load(cfg)? {
        Packet::Elliptic(p) => Ok(p),
        Packet::Hilbert(p) => Err(CliError::Input(format!("{} is a Hilbert packet; an elliptic packet is required", p.label))),
    }
}

/// The packet itself if Hilbert, else its base change to `Q(sqrt --disc)`.
fn load_hilbert(cfg: &RunConfig) -> Result<(Option<EllipticEigenPacket>, HilbertEigenPacket)> {
    match load(cfg)? {
        Packet::Hilbert(p) => Ok((None, p)),
        Packet::Elliptic(pi) => {
            let bc = base_change(&pi, cfg.disc()?)?;
            Ok((Some(pi), bc))
        }
    }
}

fn character(cfg: &RunConfig, pi: Option<&EllipticEigenPacket>, eta: &QuadCharacter) -> Result<DirichletCharacter> {
    if cfg.wants_distinguished() {
        let pi = pi.ok_or_else(|| CliError::Input("--char distinguished needs an elliptic packet".into()))?;
        return Ok(distinguished_character(pi, eta));
    }
    Ok(cfg.explicit_char()?.unwrap_or_else(|| DirichletCharacter::trivial(1)))
}

fn describe_hilbert(r: &mut Report, bc: &HilbertEigenPacket) {
    r.set("label", &bc.label);
    r.set("disc", bc.eta.disc);
    r.set("level_norm", bc.level_norm);
    r.set("weight", format!("({}, {})", bc.weight.0, bc.weight.1));
    r.set("central_character", &bc.central);
    r.set("coefficient_field", min_poly(&bc.field));
    r.set("cutoff", bc.cutoff);
}

fn entry_row(l: u64, e: &HilbertEntry) -> Vec<String> {
    let (a, b) = match e {
        HilbertEntry::Split([x, y]) => (x.to_string(), y.to_string()),
        HilbertEntry::Inert(x) | HilbertEntry::Ramified(x) => (x.to_string(), String::new()),
        HilbertEntry::Unsupported => (String::new(), String::new()),
    };
    vec![l.to_string(), e.split_type_name().to_string(), a, b]
}

pub fn ingest(cfg: &RunConfig) -> Result<Report> {
    match load(cfg)? {
        Packet::Elliptic(pi) => {
            let mut r = Report::new("ingest", &["l", "a_l"]);
            r.set("kind", "elliptic");
            r.set("label", &pi.label);
            r.set("level", pi.level);
            r.set("weight", pi.weight);
            r.set("character", &pi.character);
            r.set("coefficient_field", min_poly(&pi.field));
            r.set("cutoff", pi.cutoff);
            r.set("ramanujan_flags", format!("{:?}", pi.ramanujan_flags));
            let cut = cfg.primes(pi.cutoff);
            for l in pi.primes().filter(|&l| l <= cut).collect::<Vec<_>>() {
                r.push(vec![l.to_string(), pi.ap(l)?.to_string()]);
            }
            Ok(r)
        }
        Packet::Hilbert(bc) => {
            let mut r = Report::new("ingest", &["l", "type", "eigenvalue_1", "eigenvalue_2"]);
            r.set("kind", "hilbert");
            describe_hilbert(&mut r, &bc);
            let cut = cfg.primes(bc.cutoff);
            for (l, e) in bc.entries().filter(|(l, _)| **l <= cut) {
                r.push(entry_row(*l, e));
            }
            Ok(r)
        }
    }
}

pub fn base_change_cmd(cfg: &RunConfig) -> Result<Report> {
    let pi = load_elliptic(cfg)?;
    let bc = base_change(&pi, cfg.disc()?)?;
    let mut r = Report::new("base-change", &["l", "type", "eigenvalue_1", "eigenvalue_2"]);
    describe_hilbert(&mut r, &bc);
    r.set("source", &pi.label);
    let cut = cfg.primes(bc.cutoff);
    for (l, e) in bc.entries().filter(|(l, _)| **l <= cut) {
        r.push(entry_row(*l, e));
    }
    Ok(r)
}

fn primes_within(cfg: &RunConfig, cutoff: u64) -> Vec<u64> {
    primes_up_to(cfg.primes(cutoff).min(cutoff))
}

pub fn euler_table(cfg: &RunConfig) -> Result<Report> {
    let (pi, bc) = load_hilbert(cfg)?;
    let chi = character(cfg, pi.as_ref(), &bc.eta)?;
    let mut r = Report::new("euler-table", &["l", "type", "tag", "coefficients"]);
    describe_hilbert(&mut r, &bc);
    r.set("character", &chi);
    for l in primes_within(cfg, bc.cutoff) {
        let f = asai_euler_factor(&bc, &chi, l)?;
        let ty = bc.entry(l).map(|e| e.split_type_name()).unwrap_or("unsupported");
        r.push(vec![l.to_string(), ty.to_string(), tag_name(&f.tag), f.coeff_strings().join("; ")]);
    }
    Ok(r)
}

fn tag_name<T: serde::Serialize>(t: &T) -> String {
    serde_json::to_value(t).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

pub fn factor_check(cfg: &RunConfig) -> Result<Report> {
    let pi = load_elliptic(cfg)?;
    let bc = base_change(&pi, cfg.disc()?)?;
    let chi = character(cfg, Some(&pi), &bc.eta)?;
    let mut r = Report::new("factor-check", &["l", "type", "asai", "sym2", "dirichlet", "status"]);
    describe_hilbert(&mut r, &bc);
    r.set("character", &chi);
    let (mut good, mut bad, mut skipped) = (0, 0, 0);
    for l in primes_within(cfg, pi.cutoff) {
        let c = factorization_check(&pi, &bc, &chi, l)?;
        let status = match c.matched {
            Some(true) => {
                good += 1;
                "match"
            }
            Some(false) => {
                bad += 1;
                "MISMATCH"
            }
            None => {
                skipped += 1;
                "skipped"
            }
        };
        r.push(vec![
            l.to_string(),
            c.split.to_string(),
            c.asai.coeff_strings().join("; "),
            c.sym2.coeff_strings().join("; "),
            c.dirichlet.coeff_strings().join("; "),
            status.to_string(),
        ]);
    }
    r.set("matched", good);
    r.set("mismatched", bad);
    r.set("skipped", skipped);
    r.fail_if(bad > 0);
    Ok(r)
}

pub fn asai_series(cfg: &RunConfig) -> Result<Report> {
    let (pi, bc) = load_hilbert(cfg)?;
    let chi = character(cfg, pi.as_ref(), &bc.eta)?;
    let cutoff = cfg.primes(100).min(bc.cutoff) as usize;
    let seq = imprimitive_asai_coeffs(&bc, &chi, cutoff, BadPrimePolicy::Error)?;
    let mut r = Report::new("asai-series", &["n", "b_n"]);
    describe_hilbert(&mut r, &bc);
    r.set("character", &chi);
    r.set("provenance", tag_name(&seq.provenance));
    for (i, b) in seq.coeffs().iter().enumerate() {
        r.push(vec![(i + 1).to_string(), b.to_string()]);
    }
    Ok(r)
}

pub fn pole_probe_cmd(cfg: &RunConfig) -> Result<Report> {
    let grid = cfg.eps_grid()?;
    let cutoff = cfg.primes(100_000) as usize;
    let mut r = Report::new("pole-probe", &["refinement", "eps", "values", "c", "d"]);
    let seq = if cfg.pi.is_some() {
        let (pi, bc) = load_hilbert(cfg)?;
        let chi = character(cfg, pi.as_ref(), &bc.eta)?;
        if cutoff as u64 > bc.cutoff {
            return Err(CliError::Input(format!("--primes {cutoff} exceeds packet cutoff {}", bc.cutoff)));
        }
        let roots = bc.field.roots();
        if cfg.embedding >= roots.len().max(1) {
            return Err(CliError::Input(format!("--embedding {} out of range", cfg.embedding)));
        }
        describe_hilbert(&mut r, &bc);
        r.set("character", &chi);
        if let Some(z) = roots.get(cfg.embedding) {
            r.set("embedding_root", format!("{:.12} {:+.12}i", z.re, z.im));
        }
        imprimitive_asai_embedded(&bc, &chi, cutoff, BadPrimePolicy::Error, cfg.embedding)?
    } else {
        match cfg.explicit_char()? {
            Some(chi) => EmbeddedSeq::from_character(&chi, cutoff),
            None => EmbeddedSeq::ones(cutoff),
        }
    };
    r.set("embedding", cfg.embedding);
    let probe = pole_probe(&seq, &grid, &ProbeConfig::default())?;
    r.set("series", &probe.label);
    r.set("cutoff", probe.cutoff);
    r.set("mean_density", format!("{:.6}", probe.mean_density));
    r.set("residue_estimate", format!("{:.6}", probe.residue_estimate));
    r.set("verdict", tag_name(&probe.verdict));
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
    for (i, f) in probe.fits.iter().enumerate() {
        r.push(vec![i.to_string(), fmt(&f.eps), fmt(&f.values), format!("{:.6}", f.c), format!("{:.6}", f.d)]);
    }
    if let Some(e) = cfg.expect.as_deref() {
        let want = match e {
            "pole" => Verdict::Pole,
            "bounded" => Verdict::Bounded,
            _ => return Err(CliError::Input(format!("--expect {e:?}: expected pole or bounded"))),
        };
        r.fail_if(probe.verdict != want);
    }
    Ok(r)
}
