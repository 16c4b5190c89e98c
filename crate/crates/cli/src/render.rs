//! One result rendered three ways.

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// A command's result: structured data, an optional table and a human view.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub pretty: String,
    /// False when a verification failed.
    pub pass: bool,
}

impl Report {
    pub fn new<T: Serialize>(data: &T, pretty: String, pass: bool) -> Result<Self, CliError> {
        let json = serde_json::to_value(data).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(Report { json, csv: None, pretty, pass })
    }

    pub fn with_csv(mut self, table: &Table) -> Result<Self, CliError> {
        self.csv = Some(table.to_csv()?);
        Ok(self)
    }

    pub fn with_raw_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format, command: &str) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Internal(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => match &self.csv {
                Some(t) => Ok(t.clone()),
                None => Err(CliError::Invalid(format!("csv output is not available for {command}"))),
            },
            Format::Pretty => {
                let mut s = self.pretty.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                Ok(s)
            }
        }
    }
}

/// A header row plus data rows.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for row in &self.rows {
            w.write_record(row).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    /// Right-aligned columns separated by two spaces.
    pub fn aligned(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(cols) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{}{}", " ".repeat(w - c.chars().count()), c))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        for row in &self.rows {
            out.push('\n');
            out.push_str(&line(row));
        }
        out.push('\n');
        out
    }
}

pub fn tuple(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        let mut t = Table::new(["k", "value"]);
        t.push(vec!["1".into(), "10".into()]);
        t.push(vec!["12".into(), "3".into()]);
        assert_eq!(t.aligned(), " k  value\n--  -----\n 1     10\n12      3\n");
        assert_eq!(t.to_csv().unwrap(), "k,value\n1,10\n12,3\n");
    }
}
