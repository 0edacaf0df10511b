use crate::error::{CliError, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
        }
    }
}

/// One command's results: a key/value header and a table.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub header: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// `false` if any identity checked by the command failed.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            header: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
            passed: true,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.header.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn fail_if(&mut self, bad: bool) {
        if bad {
            self.passed = false;
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))? + "\n"),
            Format::Csv => self.render_csv(),
            Format::Md => Ok(self.render_md()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "# status: {}", self.status());
        let mut w = csv::Writer::from_writer(vec![]);
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.columns).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    fn render_md(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|");
        let mut out = format!("# {}\n\n| key | value |\n| --- | --- |\n", self.command);
        for (k, v) in &self.header {
            let _ = writeln!(out, "| {} | {} |", cell(k), cell(v));
        }
        let _ = writeln!(out, "| status | {} |\n", self.status());
        let _ = writeln!(out, "| {} |", self.columns.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | "));
        let _ = writeln!(out, "|{}", " --- |".repeat(self.columns.len()));
        for r in &self.rows {
            let _ = writeln!(out, "| {} |", r.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | "));
        }
        out
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Writes `<command>.<ext>` under `dir`, or to stdout.
pub fn emit_report(report: &Report, format: Format, dir: Option<&Path>) -> Result<()> {
    let text = report.render(format)?;
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| CliError::Output(format!("{}: {e}", d.display())))?;
            let path = d.join(format!("{}.{}", report.command, format.ext()));
            std::fs::write(&path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
