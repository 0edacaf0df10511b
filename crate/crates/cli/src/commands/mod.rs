mod families;
mod local;
mod lseries;

use crate::config::{Command, RunConfig};
use crate::error::Result;
use crate::report::Report;

pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    let mut r = match cfg.command {
        Command::Ingest => lseries::ingest(cfg),
        Command::BaseChange => lseries::base_change_cmd(cfg),
        Command::EulerTable => lseries::euler_table(cfg),
        Command::FactorCheck => lseries::factor_check(cfg),
        Command::AsaiSeries => lseries::asai_series(cfg),
        Command::PoleProbe => lseries::pole_probe_cmd(cfg),
        Command::KlZeta => families::kl_zeta(cfg),
        Command::EisFamily => families::eis_family(cfg),
        Command::DepletionCheck => families::depletion_check(cfg),
        Command::StabilizationCheck => families::stabilization(cfg),
        Command::EpFactor => families::ep_factor(cfg),
        Command::TrivialZero => families::trivial_zero(cfg),
        Command::LocalzetaVerify => local::localzeta_verify(cfg),
    }?;
    debug_assert_eq!(r.command, cfg.command.name());
    r.header.extend(cfg.echo());
    Ok(r)
}
