use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// A flat experiment result: parameters plus string cells, so every
/// experiment renders through the same three writers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            parameters: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.to_table()),
            Format::Csv => self.to_csv(),
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("experiment: {}\n", self.experiment);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "{k}: {v}");
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&self.columns));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    /// Parameters go in `# key: value` lines ahead of the header.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!("# experiment: {}\n", self.experiment);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        out.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(out)
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut experiment = None;
        let mut parameters = Vec::new();
        let mut body = String::new();
        for line in s.lines() {
            match line.strip_prefix("# ") {
                Some(meta) if body.is_empty() => {
                    let (k, v) = meta.split_once(": ").context("malformed csv metadata line")?;
                    if k == "experiment" && experiment.is_none() {
                        experiment = Some(v.to_string());
                    } else {
                        parameters.push((k.to_string(), v.to_string()));
                    }
                }
                _ => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let Some(experiment) = experiment else { bail!("csv report lacks an experiment line") };
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| Ok(rec?.iter().map(str::to_string).collect()))
            .collect::<Result<_>>()?;
        Ok(ExperimentReport { experiment, parameters, columns, rows })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl FromStr for ExperimentReport {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_csv(s)
        }
    }
}
