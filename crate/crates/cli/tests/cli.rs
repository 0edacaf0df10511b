use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn asai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asai")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn ok(args: &[&str]) -> serde_json::Value {
    let o = asai(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    v
}

#[test]
fn ingest_elliptic_and_errors() {
    let v = ok(&["ingest", "--pi", &data("11a.json"), "--primes", "13"]);
    assert_eq!(v["header"]["label"], "11a");
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"][0], serde_json::json!(["2", "-2"]));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"label\": ").unwrap();
    assert_eq!(code(&asai(&["ingest", "--pi", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&asai(&["ingest", "--pi", "/nonexistent/packet.json"])), 2);
    assert_eq!(code(&asai(&["ingest"])), 2);
    assert_eq!(code(&asai(&["no-such-command"])), 2);
    assert_eq!(code(&asai(&["kl-zeta", "--p", "0"])), 2);
}

#[test]
fn base_change_table() {
    let v = ok(&["base-change", "--pi", &data("delta.json"), "--disc", "5", "--primes", "20"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let five = rows.iter().find(|r| r[0] == "5").unwrap();
    assert_eq!(five[1], "ramified");
    let eleven = rows.iter().find(|r| r[0] == "11").unwrap();
    assert_eq!(eleven[1], "split");
    assert_eq!(eleven[2], eleven[3]);
}

#[test]
fn euler_table_and_bad_character() {
    let v = ok(&["euler-table", "--pi", &data("delta_psi4.json"), "--disc", "5", "--char", "4:1", "--primes", "30"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["header"]["character"], "chi[mod 4; exps (1); order 2]");
    let o = asai(&["euler-table", "--pi", &data("delta.json"), "--disc", "5", "--char", "4:1,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn factor_check_csv_one_row_per_prime() {
    let o = asai(&["factor-check", "--pi", &data("delta.json"), "--disc", "5", "--primes", "1000", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "l,type,asai,sym2,dirichlet,status");
    assert_eq!(rows.len() - 1, 168);
    assert!(!text.contains("MISMATCH"));
    assert!(text.contains("# status: pass"));
}

#[test]
fn empty_result_is_header_only() {
    let o = asai(&["factor-check", "--pi", &data("delta.json"), "--disc", "5", "--primes", "1", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().starts_with("l,type"));
    let v = ok(&["factor-check", "--pi", &data("delta.json"), "--disc", "5", "--primes", "1"]);
    assert!(v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn asai_series_coefficients() {
    let v = ok(&["asai-series", "--pi", &data("delta.json"), "--disc", "5", "--primes", "12"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0], serde_json::json!(["1", "1"]));
}

#[test]
fn pole_probe_verdicts_and_expectation() {
    let v = ok(&["pole-probe", "--primes", "20000", "--expect", "pole"]);
    assert_eq!(v["header"]["verdict"], "pole");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let o = asai(&["pole-probe", "--primes", "20000", "--expect", "bounded"]);
    assert_eq!(code(&o), 1);
    let o = asai(&["pole-probe", "--primes", "1000", "--eps-grid", "0.1,0.2"]);
    assert_eq!(code(&o), 2);
    let v = ok(&["pole-probe", "--pi", &data("delta_psi4.json"), "--disc", "5", "--char", "distinguished", "--primes", "1000"]);
    assert_eq!(v["header"]["embedding"], "0");
    assert!(v["header"]["embedding_root"].as_str().unwrap().contains('i'));
}

#[test]
fn kl_zeta_residue_report() {
    let v = ok(&["kl-zeta", "--p", "5", "--branch", "0", "--prec", "10"]);
    assert_eq!(v["header"]["pole_order"], "1");
    assert!(v["header"]["residue_closed_form"].as_str().unwrap().contains("1 - 1/5"));
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r[3] == "match"));
    assert_eq!(code(&asai(&["kl-zeta", "--p", "5", "--branch", "1"])), 2);
    assert_eq!(code(&asai(&["kl-zeta", "--p", "9"])), 2);
}

#[test]
fn eis_family_markdown() {
    let o = asai(&["eis-family", "--p", "5", "--level", "1", "--trunc", "4", "--kind", "katz", "--format", "md"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# eis-family\n"));
    assert!(text.contains("| n | coefficient |"));
    assert_eq!(text.lines().filter(|l| l.starts_with("| 4 |")).count(), 1);
    assert_eq!(code(&asai(&["eis-family", "--p", "5", "--kind", "round"])), 2);
}

#[test]
fn depletion_check_passes() {
    for level in ["1", "3", "5"] {
        let v = ok(&["depletion-check", "--p", "5", "--level", level, "--trunc", "60"]);
        assert_eq!(v["header"]["mismatches"], "0");
    }
}

#[test]
fn stabilization_check_passes() {
    let v = ok(&["stabilization-check", "--p", "7", "--level", "4", "--k", "4", "--trunc", "40"]);
    assert_eq!(v["header"]["constant_match"], "true");
    assert!(v["rows"].as_array().unwrap().is_empty());
    assert_eq!(code(&asai(&["stabilization-check", "--p", "7", "--k", "3", "--trunc", "20"])), 2);
}

#[test]
fn ep_factor_rows() {
    let v = ok(&["ep-factor", "--stub", &data("stub_delta_p29.json")]);
    assert_eq!(v["header"]["symbolic_identity"], "true");
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(code(&asai(&["ep-factor", "--stub", &data("delta.json")])), 2);
}

#[test]
fn trivial_zero_report() {
    let v = ok(&["trivial-zero", "--stub", &data("stub_delta_p29.json")]);
    assert_eq!(v["rows"][0][0], "true");
    assert_eq!(v["rows"][0][4], "true");
    let v = ok(&["trivial-zero", "--stub", &data("stub_delta_psi4_p29.json")]);
    assert_eq!(v["header"]["embedding_root_mod_p"], "12");
}

#[test]
fn localzeta_verify_all() {
    let v = ok(&["localzeta-verify", "--q", "2", "--trials", "2", "--r", "1", "--seed", "7"]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r[4] == "pass"));
    let v = ok(&["localzeta-verify", "--kind", "zeta1", "--trials", "1"]);
    assert_eq!(v["rows"][0][0], "zeta1/symbolic");
    assert_eq!(code(&asai(&["localzeta-verify", "--kind", "zeta3"])), 2);
    assert_eq!(code(&asai(&["localzeta-verify", "--q", "1"])), 2);
}

#[test]
fn reports_are_deterministic() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let pi = data("delta_psi4.json");
    for fmt in ["json", "csv", "md"] {
        for d in [&d1, &d2] {
            let o = asai(&["factor-check", "--pi", &pi, "--disc", "5", "--primes", "200", "--format", fmt, "--out", d.path().to_str().unwrap()]);
            assert_eq!(code(&o), 0);
            assert!(o.stdout.is_empty());
            let o = asai(&["localzeta-verify", "--q", "3", "--trials", "2", "--r", "1", "--kind", "zeta1", "--format", fmt, "--out", d.path().to_str().unwrap()]);
            assert_eq!(code(&o), 0);
        }
        for name in ["factor-check", "localzeta-verify"] {
            let f = format!("{name}.{fmt}");
            let a = std::fs::read(d1.path().join(&f)).unwrap();
            let b = std::fs::read(d2.path().join(&f)).unwrap();
            assert!(!a.is_empty());
            assert_eq!(a, b, "{f} differs between runs");
        }
    }
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let o = asai(&["eis-family", "--p", "5", "--trunc", "3", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
