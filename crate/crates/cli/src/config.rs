use crate::error::{CliError, Result};
use crate::report::Format;
use asai_core::characters::DirichletCharacter;
use asai_core::exactnum::is_prime;
use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Default seed for randomized suites.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug, Clone)]
#[command(name = "asai", version, about = "Asai L-function, p-adic family and local zeta verification suites")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Eigenpacket JSON file.
    #[arg(long, global = true)]
    pub pi: Option<PathBuf>,
    /// Family stub JSON file.
    #[arg(long, global = true)]
    pub stub: Option<PathBuf>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: Option<u64>,
    /// p-adic precision n.
    #[arg(long, global = true, value_parser = clap::value_parser!(i64).range(1..))]
    pub prec: Option<i64>,
    /// q-expansion truncation order.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trunc: Option<u64>,
    /// Prime (or coefficient) cutoff.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub primes: Option<u64>,
    /// Discriminant of the real quadratic field.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub disc: Option<u64>,
    /// Tame level N.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub level: Option<u64>,
    /// Dirichlet character `modulus:e1,e2,..` or `distinguished`.
    #[arg(long = "char", global = true)]
    pub chr: Option<String>,
    /// Comma-separated, strictly decreasing epsilon grid.
    #[arg(long, global = true)]
    pub eps_grid: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Branch of weight space (kl-zeta).
    #[arg(long, global = true)]
    pub branch: Option<u64>,
    /// Classical weight.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Residue field size; symbolic if absent (localzeta-verify).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..))]
    pub q: Option<u64>,
    /// katz | flat | sharp (eis-family); zeta1 | zeta2 | ratio | all (localzeta-verify).
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Conductor exponent r for the limiting zeta integral.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: Option<u32>,
    /// Number of random tuples.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Complex embedding index of the coefficient field.
    #[arg(long, global = true, default_value_t = 0)]
    pub embedding: usize,
    /// Expected pole-probe verdict: pole | bounded.
    #[arg(long, global = true)]
    pub expect: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Parse and validate an eigenpacket.
    Ingest,
    /// Base change of an elliptic packet to Q(sqrt D).
    BaseChange,
    /// Asai Euler factors prime by prime.
    EulerTable,
    /// Asai = Sym^2 x Dirichlet factorization at each prime.
    FactorCheck,
    /// Dirichlet coefficients of the imprimitive Asai L-series.
    AsaiSeries,
    /// Numerical pole detection at s = 1.
    PoleProbe,
    /// Kubota-Leopoldt zeta function on a branch.
    KlZeta,
    /// q-expansion of a two-variable Eisenstein family.
    EisFamily,
    /// Depleted families against one-variable slices.
    DepletionCheck,
    /// p-stabilization of a classical Eisenstein series.
    StabilizationCheck,
    /// Euler factor brackets on a family stub.
    EpFactor,
    /// Trivial-zero detection at the m = 0 row of a stub.
    TrivialZero,
    /// Local zeta integral identities.
    LocalzetaVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::BaseChange => "base-change",
            Command::EulerTable => "euler-table",
            Command::FactorCheck => "factor-check",
            Command::AsaiSeries => "asai-series",
            Command::PoleProbe => "pole-probe",
            Command::KlZeta => "kl-zeta",
            Command::EisFamily => "eis-family",
            Command::DepletionCheck => "depletion-check",
            Command::StabilizationCheck => "stabilization-check",
            Command::EpFactor => "ep-factor",
            Command::TrivialZero => "trivial-zero",
            Command::LocalzetaVerify => "localzeta-verify",
        }
    }
}

fn missing(flag: &str) -> CliError {
    CliError::Input(format!("--{flag} is required"))
}

impl RunConfig {
    /// `--p`, which must be an odd prime.
    pub fn odd_prime(&self) -> Result<u64> {
        let p = self.p.ok_or_else(|| missing("p"))?;
        if p == 2 || !is_prime(p) {
            return Err(CliError::Input(format!("--p {p} is not an odd prime")));
        }
        Ok(p)
    }

    pub fn prec(&self) -> i64 {
        self.prec.unwrap_or(10)
    }

    pub fn trunc(&self) -> usize {
        self.trunc.unwrap_or(100) as usize
    }

    pub fn primes(&self, default: u64) -> u64 {
        self.primes.unwrap_or(default)
    }

    pub fn disc(&self) -> Result<u64> {
        self.disc.ok_or_else(|| missing("disc"))
    }

    pub fn level(&self) -> u64 {
        self.level.unwrap_or(1)
    }

    pub fn read(&self, path: &Option<PathBuf>, flag: &str) -> Result<String> {
        let path = path.as_ref().ok_or_else(|| missing(flag))?;
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn eps_grid(&self) -> Result<Vec<f64>> {
        let s = self.eps_grid.as_deref().unwrap_or("0.4,0.3,0.2,0.1");
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| CliError::Input(format!("--eps-grid {t:?}: {e}"))))
            .collect()
    }

    /// Parses `modulus:e1,e2,..`; `None` for the default or `distinguished`.
    pub fn explicit_char(&self) -> Result<Option<DirichletCharacter>> {
        match self.chr.as_deref() {
            None | Some("distinguished") => Ok(None),
            Some(s) => parse_char(s).map(Some),
        }
    }

    pub fn wants_distinguished(&self) -> bool {
        self.chr.as_deref() == Some("distinguished")
    }

    /// Every option that was set, for report headers.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut h = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                h.insert(format!("config.{k}"), v);
            }
        };
        put("pi", self.pi.as_ref().map(|p| p.display().to_string()));
        put("stub", self.stub.as_ref().map(|p| p.display().to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("prec", self.prec.map(|v| v.to_string()));
        put("trunc", self.trunc.map(|v| v.to_string()));
        put("primes", self.primes.map(|v| v.to_string()));
        put("disc", self.disc.map(|v| v.to_string()));
        put("level", self.level.map(|v| v.to_string()));
        put("char", self.chr.clone());
        put("eps_grid", self.eps_grid.clone());
        put("seed", Some(self.seed.to_string()));
        put("branch", self.branch.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("q", self.q.map(|v| v.to_string()));
        put("kind", self.kind.clone());
        put("r", self.r.map(|v| v.to_string()));
        put("trials", self.trials.map(|v| v.to_string()));
        put("expect", self.expect.clone());
        h
    }
}

pub fn parse_char(s: &str) -> Result<DirichletCharacter> {
    let bad = || CliError::Input(format!("--char {s:?}: expected modulus:e1,e2,.."));
    let (m, e) = s.split_once(':').ok_or_else(bad)?;
    let modulus: u64 = m.trim().parse().map_err(|_| bad())?;
    let exps = e
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DirichletCharacter::new(modulus, exps)?)
}
